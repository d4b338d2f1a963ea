// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "hooley/congruence.hpp"
#include "hooley/delta.hpp"
#include "hooley/error.hpp"
#include "hooley/meanvalue.hpp"
#include "hooley/powersums.hpp"

using namespace hooley;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

MultiPoly random_poly(std::mt19937_64& rng, unsigned t, unsigned max_deg, bool make_primitive) {
  std::uniform_int_distribution<int> nterms(1, 4), co(-9, 9);
  std::uniform_int_distribution<unsigned> ex(0, max_deg);
  while (true) {
    MultiPoly p(t);
    const int n = nterms(rng);
    for (int i = 0; i < n; ++i) {
      Exponents e(t, 0);
      unsigned left = ex(rng);
      for (unsigned v = 0; v < t && left; ++v) {
        std::uniform_int_distribution<unsigned> take(0, left);
        e[v] = take(rng);
        left -= e[v];
      }
      p.add_term(e, co(rng));
    }
    if (p.is_zero() || p.degree() == 0) continue;
    if (!make_primitive) return p;
    const mpz_class c = p.content();
    MultiPoly q(t);
    for (const auto& [e, coef] : p.terms()) q.add_term(e, coef / c);
    return q;
  }
}

mpq_class ratio_pow(u64 num, u64 base, unsigned t) {
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), base, t);
  mpq_class q(mpz_class(std::to_string(num)), den);
  q.canonicalize();
  return q;
}

const std::vector<std::vector<unsigned>> kListed = {
    {2, 3, 6},          {2, 4, 4},          {2, 3, 7, 42},         {2, 3, 8, 24},        {2, 3, 9, 18},
    {2, 3, 10, 15},     {2, 3, 12, 12},     {2, 4, 8, 8},          {2, 3, 7, 84, 84},    {2, 3, 8, 48, 48},
    {2, 3, 18, 18, 18}, {2, 4, 8, 16, 16},  {2, 3, 12, 24, 24},    {2, 3, 12, 36, 36, 36},
    {2, 4, 8, 24, 24, 24}, {2, 4, 8, 16, 32, 32},
};

PowerSystem unit_system(const std::vector<unsigned>& l) { return PowerSystem(std::vector<u64>(l.size(), 1), l); }

// The panel shared by criteria 5 and 6: 50 primitive polynomials, t <= 3, g <= 4.
std::vector<MultiPoly> primitive_panel() {
  std::mt19937_64 rng(4141);
  std::vector<MultiPoly> panel;
  for (int i = 0; i < 50; ++i) panel.push_back(random_poly(rng, 1 + i % 3, 4, true));
  return panel;
}

Outcome c1() {
  auto t0 = Clock::now();
  u64 bad = 0, first_bad = 0;
  for (u64 n = 1; n <= 100'000; ++n) {
    auto d = divisor_list(n);
    if (delta_window_scan(d.divisors) != delta_grid_max(d.divisors)) {
      if (!bad) first_bad = n;
      ++bad;
    }
  }
  double s = seconds_since(t0);
  std::ostringstream o;
  o << "n <= 1e5, mismatches " << bad;
  if (bad) o << " (first n=" << first_bad << ")";
  o << ", " << s << " s";
  return {bad == 0 && s < 60.0, o.str()};
}

Outcome c2() {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> logu(0.0, std::log(1e9));
  u64 bad = 0, pairs = 0;
  while (pairs < 10'000) {
    u64 a = static_cast<u64>(std::exp(logu(rng)));
    if (a < 1) a = 1;
    std::uniform_int_distribution<u64> bd(1, 1'000'000'000 / a);
    u64 b = bd(rng);
    if (gcd_u64(a, b) != 1) continue;
    ++pairs;
    bad += delta(a * b) > divisor_count(factorize_trial(a)) * delta(b);
  }
  return {bad == 0, std::to_string(pairs) + " coprime pairs, ab <= 1e9, violations " + std::to_string(bad)};
}

Outcome c3() {
  MeanSumOptions mo;
  mo.threads = 1;
  const auto fast = delta_mean_sums(1'000'000, mo).back();
  const auto ref = delta_mean_sums_reference(1'000'000);
  const double rel = std::abs(fast.frakS - ref.frakS) / ref.frakS;
  const u64 s10 = delta_mean_sums(10).S;
  std::ostringstream o;
  o.precision(17);
  o << "S(1e6) " << fast.S << " vs " << ref.S << ", frakS rel diff " << rel << ", S(10) = " << s10;
  return {fast.S == ref.S && rel <= 1e-10 && s10 == 15, o.str()};
}

Outcome c4() {
  std::mt19937_64 rng(44);
  std::uniform_int_distribution<unsigned> td(1, 3);
  std::uniform_int_distribution<u64> sd(1, 10'000);
  u64 bad = 0;
  for (int i = 0; i < 100; ++i) {
    const unsigned t = td(rng);
    const auto T = random_poly(rng, t, 4, false);
    // whole-modulus brute force stays under 1e7 residue points
    const u64 cap = t == 1 ? 10'000 : t == 2 ? 3'000 : 200;
    u64 s1 = 1 + sd(rng) % (cap / 2), s2 = sd(rng);
    while (gcd_u64(s1, s2) != 1 || s1 * s2 > cap) s2 = 1 + sd(rng) % cap;
    const u64 whole = rho_plus(T, s1 * s2, RhoMethod::bruteforce).value;
    const u64 prod = rho_plus(T, s1, RhoMethod::bruteforce).value * rho_plus(T, s2, RhoMethod::bruteforce).value;
    bad += whole != prod;
  }
  return {bad == 0, "100 instances (s1 s2 <= 1e4/3000/200 for t = 1/2/3), mismatches " + std::to_string(bad)};
}

Outcome c5() {
  u64 rows = 0, bad = 0;
  for (const auto& T : primitive_panel()) {
    auto r = check_schwartz_zippel(T, 53);
    rows += r.rows.size();
    bad += r.failures();
  }
  return {bad == 0 && rows > 0, "50 primitive polynomials, p <= 53, " + std::to_string(rows) +
                                    " (T, p) rows, violations " + std::to_string(bad)};
}

Outcome c6() {
  Budget b;
  b.max_points = 1'000'000;  // p^(nu t) <= 1e6
  auto panel = primitive_panel();
  std::mt19937_64 rng(66);
  for (int i = 0; i < 10; ++i) panel.push_back(random_poly(rng, 1 + i % 3, 4, false) * mpz_class(2 + i % 5));
  u64 rows = 0, bad = 0;
  for (const auto& T : panel) {
    auto r = check_stewart_bound(T, 53, 40, b);
    rows += r.rows.size();
    bad += r.failures();
  }
  auto tight = check_stewart_bound(MultiPoly::parse("3 x1"), 3, 1, b);
  bool tight_ok = false;
  for (const auto& row : tight.rows)
    if (row.instance.find("p=3") != std::string::npos) tight_ok = row.pass && row.lhs == row.rhs;
  return {bad == 0 && rows > 0 && tight_ok, std::to_string(panel.size()) + " polynomials, " + std::to_string(rows) +
                                                " (T, p, nu) rows, violations " + std::to_string(bad) +
                                                ", 3X at p=3 tight " + (tight_ok ? "yes" : "no")};
}

Outcome c7() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<u64> sd(1, 16);
  u64 checked = 0, bad = 0;
  for (int i = 0; checked < 200 && i < 10'000; ++i) {
    const unsigned t = 1 + i % 2;
    std::vector<MultiPoly> R{random_poly(rng, t, 3, false), random_poly(rng, t, 2, false)};
    ModulusVector s({sd(rng), sd(rng)});
    if (checked_pow(s.K(), t) > 1'000'000) continue;
    ++checked;
    const auto sharp = rho_sharp(R, s);
    const auto plus = rho_vector_plus(R, s, RhoMethod::bruteforce);
    bad += ratio_pow(sharp.value, s.K(), t) > ratio_pow(plus.value, s.lcm(), t);
  }
  return {checked == 200 && bad == 0,
          std::to_string(checked) + " instances with K(s)^t <= 1e6, violations " + std::to_string(bad)};
}

Outcome c8() {
  std::mt19937_64 rng(88);
  std::uniform_int_distribution<u64> sd(1, 12);
  u64 checked = 0, bad = 0;
  for (int i = 0; checked < 100 && i < 10'000; ++i) {
    const unsigned t = 1 + i % 2;
    std::vector<MultiPoly> R{random_poly(rng, t, 4, false), random_poly(rng, t, 2, false)};
    ModulusVector a({sd(rng), sd(rng)});
    if (checked_pow(a.K(), t) > 200'000) continue;
    ++checked;
    bad += !density_identity_check(R, a).pass;
  }
  return {checked == 100 && bad == 0, std::to_string(checked) + " instances, mismatches " + std::to_string(bad)};
}

Outcome c9() {
  u64 cases = 0, bad = 0;
  const auto X = MultiPoly::variable(1, 0);
  for (u64 l = 2; l <= 30; ++l) {
    const auto Xl = X + MultiPoly::constant(1, l);
    const std::vector<MultiPoly> R{X, Xl};
    for (const auto& pp : factorize_trial(l)) {
      ++cases;
      bad += rho_sharp(R, ModulusVector({pp.p, 1}), RhoMethod::bruteforce).value != 0;
      bad += rho_sharp(R, ModulusVector({pp.p, 1})).value != 0;
      bad += rho_plus(X * Xl, pp.p, RhoMethod::bruteforce).value != 1;
    }
  }
  return {bad == 0, std::to_string(cases) + " (l, p) cases, l in [2,30], mismatches " + std::to_string(bad)};
}

Outcome c10() {
  u64 records = 0, bad = 0, skipped = 0;
  for (const auto& l : kListed) {
    auto sys = unit_system(l);
    for (u64 x : {1'000ull, 10'000ull, 100'000ull, 1'000'000ull}) {
      try {
        bad += !check_cs_and_split(v_counts(x, sys)).pass();
        ++records;
      } catch (const BudgetError&) {
        ++skipped;
      }
    }
  }
  VRecord r8 = v_counts(8, PowerSystem({1, 1}, {2, 2}));
  const bool desk = r8 == VRecord{8, 3, 4, 6, 4, 2};
  return {bad == 0 && desk, std::to_string(records) + " records, failures " + std::to_string(bad) + ", skipped " +
                                std::to_string(skipped) + ", x=8 record " + (desk ? "(3,4,6,4,2)" : "wrong")};
}

Outcome c11() {
  u64 rows = 0, bad = 0;
  double worst = 0.0;
  for (const auto& l : {std::vector<unsigned>{2, 4, 4}, std::vector<unsigned>{2, 3, 6}}) {
    for (u64 x : {1'000ull, 10'000ull, 100'000ull, 1'000'000ull}) {
      auto r = check_prop52(x, unit_system(l));
      ++rows;
      bad += !r.pass();
      worst = std::max(worst, r.max_ratio());
    }
  }
  std::ostringstream o;
  o << rows << " (l, x) cases, violations " << bad << ", max lhs/rhs " << worst;
  return {bad == 0, o.str()};
}

Outcome c12() {
  u64 bad = 0;
  const std::vector<PowerSystem> systems = {PowerSystem({1, 1, 1}, {2, 4, 4}), PowerSystem({1, 1, 1}, {2, 3, 6}),
                                            PowerSystem({1, 2, 3, 1}, {2, 3, 8, 24})};
  for (const auto& sys : systems) {
    VCountOptions o;
    o.shard_len = 1000;
    o.checkpoints = {10, 100, 1000, 5000};
    auto recs = v_counts(10'000, sys, o);
    for (const auto& rec : recs) {
      u64 v0 = 0, v1 = 0;
      u128 v2 = 0;
      for (u64 n = 1; n <= rec.x; ++n) {
        u64 r = rep_count(n, sys);
        v0 += r != 0;
        v1 += r;
        v2 += static_cast<u128>(r) * r;
      }
      bad += rec.V0 != v0 || rec.V1 != v1 || rec.V2 != v2;
    }
  }
  return {bad == 0, "3 systems, x in {10,100,1000,5000,10000}, mismatches " + std::to_string(bad)};
}

Outcome c13() {
  u64 listed_bad = 0;
  for (const auto& l : kListed) listed_bad += !admissible(l).admissible;
  const auto a = admissible(std::vector<unsigned>{2, 3, 6, 6});
  const bool a_ok = !a.admissible && !a.reasons.empty() && a.reasons.front() == "sum 2/3 ≠ 1/2";
  const auto b = admissible(std::vector<unsigned>{2, 4, 12, 12, 12});
  const bool b_ok = !b.admissible && b.s == 3 && !b.cond_ii && b.sum_is_half;
  const std::vector<unsigned> base{2, 3, 6};
  const bool ext = extend(base, ExtendMode::plus) == std::vector<unsigned>{2, 3, 12, 12} &&
                   extend(base, ExtendMode::star) == std::vector<unsigned>{2, 3, 18, 18, 18};
  return {listed_bad == 0 && a_ok && b_ok && ext,
          std::to_string(kListed.size() - listed_bad) + "/" + std::to_string(kListed.size()) +
              " listed admissible, (2,3,6,6) " + (a_ok ? "rejected: sum 2/3 ≠ 1/2" : "wrong") +
              ", (2,4,12,12,12) " + (b_ok ? "rejected: (ii)" : "wrong") + ", extend " + (ext ? "ok" : "wrong")};
}

Outcome c14() {
  auto t0 = Clock::now();
  std::vector<u64> grid;
  for (u64 x = 1'000; x <= 100'000'000; x *= 10) grid.push_back(x);
  auto tab = growth_table(PowerSystem({1, 1, 1}, {2, 4, 4}), grid);
  const double s = seconds_since(t0);
  bool finite = true;
  for (const auto& r : tab.rows) finite = finite && std::isfinite(r.r1) && std::isfinite(r.r3) && r.r1 > 0;
  std::cout << "  growth (1,1,1),(2,4,4):\n";
  std::istringstream csv(growth_csv(tab));
  for (std::string line; std::getline(csv, line);) std::cout << "    " << line << '\n';
  std::ostringstream o;
  o << tab.rows.size() << " rows up to 1e8 in " << s << " s on " << resolve_threads(0)
    << " thread(s), ratios finite " << (finite ? "yes" : "no") << ", unconditional checks "
    << (tab.checks.pass() ? "pass" : "fail");
  return {finite && tab.checks.pass() && s < 600.0 && tab.rows.size() == grid.size(), o.str()};
}

Outcome c15() {
  const auto Fd = lift(MultiArithmeticFunction::delta(), {{1}});
  const std::vector<MultiPoly> X{MultiPoly::parse("x1")};
  const double desk = e_sum(X, Fd, 2, 1);

  struct Case {
    std::vector<MultiPoly> R;
    LiftedFunction F;
    unsigned t;
  };
  std::vector<Case> panel;
  panel.push_back({X, Fd, 1});
  panel.push_back({{MultiPoly::parse("x1^2 + 1")}, Fd, 1});
  panel.push_back({{MultiPoly::parse("x1^3 + 2")}, Fd, 1});
  panel.push_back({X, lift(MultiArithmeticFunction::divisor_count(1), {{1}}), 1});
  panel.push_back({{MultiPoly::parse("x1"), MultiPoly::parse("x1 + 1")},
                   lift(MultiArithmeticFunction::delta_product(2), {{1, 0}, {0, 1}}), 1});
  u64 drops = 0;
  double worst_order = 0.0;
  for (const auto& c : panel) {
    auto tab = e_sum_table(c.R, c.F, 1'000, c.t);
    for (std::size_t v = 1; v < tab.size(); ++v) drops += tab[v] < tab[v - 1];
    const double lex = e_sum(c.R, c.F, 1'000, c.t, EnumerationOrder::lexicographic);
    worst_order = std::max(worst_order, std::abs(lex - tab.back()) / tab.back());
  }
  std::ostringstream o;
  o.precision(17);
  o << "E(2) = " << desk << ", " << panel.size() << " panels to v = 1000, decreases " << drops
    << ", order rel diff " << worst_order;
  return {desk == 1.5 && drops == 0 && worst_order <= 1e-10, o.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"Delta window scan equals grid max, n <= 1e5", c1},
      {"Delta(ab) <= tau(a) Delta(b) on coprime pairs", c2},
      {"S and frakS at 1e6 by two routes; S(10) = 15", c3},
      {"rho^+ CRT multiplicativity", c4},
      {"rho^+(p) <= g p^(t-1)", c5},
      {"prime-power bound with content", c6},
      {"rho^# density below rho^+ density", c7},
      {"rho^# density equals period-scan density", c8},
      {"X(X+l), p | l: rho^# = 0, rho^+(p) = 1", c9},
      {"Cauchy-Schwarz and V2 split on listed systems", c10},
      {"V2^= bound via truncated system", c11},
      {"v_counts equals per-n oracle", c12},
      {"admissibility list, failures, extend", c13},
      {"growth table to 1e8, monitored ratios", c14},
      {"E_R desk value and monotonicity", c15},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome r;
    auto t0 = Clock::now();
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.1f s", seconds_since(t0));
    std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " -- "
              << r.detail << " [" << secs << "]" << std::endl;
    failed += !r.pass;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}
