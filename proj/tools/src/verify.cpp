#include <cmath>
#include <random>
#include <sstream>

#include "hooley/congruence.hpp"
#include "hooley/delta.hpp"
#include "hooley/error.hpp"
#include "hooley/meanvalue.hpp"
#include "hooley/powersums.hpp"
#include "powersum/cli.hpp"

namespace powersum {

using namespace hooley;

namespace {

struct Scale {
  u64 delta_n, submult_pairs, mean_x, poly_panel, x_power, oracle_x, v_esum;
};

Scale scale_for(const Budget& b) {
  if (b.name == "small") return {20'000, 2'000, 100'000, 20, 10'000, 2'000, 200};
  if (b.name == "large") return {100'000, 10'000, 1'000'000, 50, 1'000'000, 10'000, 1'000};
  return {100'000, 10'000, 1'000'000, 50, 100'000, 5'000, 1'000};
}

CheckResult count_row(std::string check, std::string instance, u64 bad) {
  return {std::move(check), std::move(instance), std::to_string(bad), "0", static_cast<double>(bad), bad == 0};
}

MultiPoly random_poly(std::mt19937_64& rng, unsigned t, unsigned max_deg, bool make_primitive = false) {
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

void delta_panel(CheckReport& rep, const Scale& sc, const Budget& budget) {
  u64 bad = 0;
  for (u64 n = 1; n <= sc.delta_n; ++n) {
    auto d = divisor_list(n);
    bad += delta_window_scan(d.divisors) != delta_grid_max(d.divisors);
  }
  rep.rows.push_back(count_row("delta_two_routes", "n<=" + std::to_string(sc.delta_n), bad));

  std::mt19937_64 rng(2);
  std::uniform_int_distribution<u64> side(1, 31'622);
  bad = 0;
  for (u64 i = 0; i < sc.submult_pairs;) {
    u64 a = side(rng), b = side(rng);
    if (gcd_u64(a, b) != 1) continue;
    ++i;
    bad += delta(a * b) > divisor_count(factorize_trial(a)) * delta(b);
  }
  rep.rows.push_back(count_row("delta_submultiplicative", std::to_string(sc.submult_pairs) + " coprime pairs", bad));

  const auto s10 = delta_mean_sums(10);
  rep.rows.push_back({"delta_S10", "x=10", std::to_string(s10.S), "15", s10.S / 15.0, s10.S == 15});

  MeanSumOptions mo;
  mo.max_x = budget.max_x;
  mo.segment_size = budget.segment_size;
  mo.threads = resolve_threads(budget.threads);
  const auto fast = delta_mean_sums(sc.mean_x, mo).back();
  const auto ref = delta_mean_sums_reference(sc.mean_x);
  const std::string inst = "x=" + std::to_string(sc.mean_x);
  rep.rows.push_back({"delta_mean_S", inst, std::to_string(fast.S), std::to_string(ref.S), double(fast.S) / ref.S,
                      fast.S == ref.S});
  const double rel = std::abs(fast.frakS - ref.frakS) / ref.frakS;
  std::ostringstream a, b;
  a.precision(17);
  b.precision(17);
  a << fast.frakS;
  b << ref.frakS;
  rep.rows.push_back({"delta_mean_frakS", inst, a.str(), b.str(), rel, rel <= 1e-10});
}

void congruence_panel(CheckReport& rep, const Scale& sc, const Budget& preset) {
  // panel sizes are fixed below, so the scans get the default ceilings
  Budget budget;
  budget.threads = preset.threads;
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<unsigned> td(1, 3);
  std::uniform_int_distribution<u64> sd(1, 100);
  u64 bad = 0, n = 0;
  for (u64 i = 0; i < sc.poly_panel; ++i) {
    const unsigned t = td(rng);
    const auto T = random_poly(rng, t, 4);
    const u64 cap = t == 1 ? 10'000 : t == 2 ? 3'000 : 200;
    u64 s1 = 1 + sd(rng) % (cap / 2), s2 = sd(rng);
    while (gcd_u64(s1, s2) != 1 || s1 * s2 > cap) s2 = sd(rng);
    const u64 whole = rho_plus(T, s1 * s2, RhoMethod::bruteforce, budget).value;
    bad += whole != rho_plus(T, s1, RhoMethod::automatic, budget).value * rho_plus(T, s2, RhoMethod::automatic, budget).value;
    ++n;
  }
  rep.rows.push_back(count_row("rho_crt_multiplicative", std::to_string(n) + " instances", bad));

  for (u64 i = 0; i < 6; ++i) {
    const auto T = random_poly(rng, 1 + static_cast<unsigned>(i % 3), 4, true);
    rep.append(check_schwartz_zippel(T, 53, budget));
    rep.append(check_stewart_bound(T, 13, 3, budget));
  }
  rep.append(check_stewart_bound(MultiPoly::parse("3 x1"), 3, 1, budget));

  bad = n = 0;
  u64 ineq_bad = 0;
  std::uniform_int_distribution<u64> small(1, 16);
  for (u64 i = 0; n < sc.poly_panel && i < 20 * sc.poly_panel; ++i) {
    const unsigned t = 1 + static_cast<unsigned>(i % 2);
    std::vector<MultiPoly> R{random_poly(rng, t, 3), random_poly(rng, t, 2)};
    ModulusVector a({small(rng), small(rng)});
    if (checked_pow(a.K(), t) > 200'000) continue;
    ++n;
    bad += !density_identity_check(R, a, budget).pass;
    const auto sharp = rho_sharp(R, a, RhoMethod::automatic, budget);
    const auto plus = rho_vector_plus(R, a, RhoMethod::automatic, budget);
    mpz_class kt, lt;
    mpz_ui_pow_ui(kt.get_mpz_t(), a.K(), t);
    mpz_ui_pow_ui(lt.get_mpz_t(), a.lcm(), t);
    ineq_bad += mpq_class(mpz_class(std::to_string(sharp.value)), kt) >
                mpq_class(mpz_class(std::to_string(plus.value)), lt);
  }
  rep.rows.push_back(count_row("density_identity", std::to_string(n) + " instances", bad));
  rep.rows.push_back(count_row("sharp_below_plus_density", std::to_string(n) + " instances", ineq_bad));

  bad = 0;
  for (u64 l = 2; l <= 30; ++l) {
    const auto X = MultiPoly::variable(1, 0);
    const auto Xl = X + MultiPoly::constant(1, l);
    const std::vector<MultiPoly> R{X, Xl};
    for (const auto& [p, e] : factorize_trial(l)) {
      (void)e;
      bad += rho_sharp(R, ModulusVector({p, 1}), RhoMethod::automatic, budget).value != 0;
      bad += rho_plus(X * Xl, p, RhoMethod::automatic, budget).value != 1;
    }
  }
  rep.rows.push_back(count_row("shared_factor_example", "Q = X(X+l), p | l, l <= 30", bad));
}

void meanvalue_panel(CheckReport& rep, const Scale& sc, const Budget& budget) {
  const std::vector<MultiPoly> R{MultiPoly::parse("x1")};
  const auto Fh = lift(MultiArithmeticFunction::delta(), {{1}});
  const double e2 = e_sum(R, Fh, 2, 1, EnumerationOrder::by_product, budget);
  std::ostringstream s;
  s.precision(17);
  s << e2;
  rep.rows.push_back({"e_sum_desk", "R=X, F=Delta, v=2", s.str(), "1.5", e2 / 1.5, e2 == 1.5});

  const auto table = e_sum_table(R, Fh, sc.v_esum, 1, EnumerationOrder::by_product, budget);
  const auto lex = e_sum_table(R, Fh, sc.v_esum, 1, EnumerationOrder::lexicographic, budget);
  u64 drops = 0, differ = 0;
  for (std::size_t v = 0; v < table.size(); ++v) {
    if (v && table[v] < table[v - 1]) ++drops;
    if (std::abs(table[v] - lex[v]) > 1e-12 * std::max(1.0, table[v])) ++differ;
  }
  const std::string inst = "v<=" + std::to_string(sc.v_esum);
  rep.rows.push_back(count_row("e_sum_monotone", inst, drops));
  rep.rows.push_back(count_row("e_sum_two_orders", inst, differ));

  auto m = class_membership_sample(MultiArithmeticFunction::delta(), 2, 2, 0.5, sc.submult_pairs / 2, 100'000, 7);
  rep.rows.push_back(count_row("delta_class_membership", std::to_string(m.checked) + " pairs", m.violations.size()));
}

void powersums_panel(CheckReport& rep, const Scale& sc, const Budget& budget) {
  static const std::vector<std::vector<unsigned>> listed = {
      {2, 3, 6},          {2, 4, 4},          {2, 3, 7, 42},         {2, 3, 8, 24},        {2, 3, 9, 18},
      {2, 3, 10, 15},     {2, 3, 12, 12},     {2, 4, 8, 8},          {2, 3, 7, 84, 84},    {2, 3, 8, 48, 48},
      {2, 3, 18, 18, 18}, {2, 4, 8, 16, 16},  {2, 3, 12, 24, 24},    {2, 3, 12, 36, 36, 36},
      {2, 4, 8, 24, 24, 24}, {2, 4, 8, 16, 32, 32},
  };
  for (const auto& l : listed) {
    PowerSystem sys(std::vector<u64>(l.size(), 1), l);
    auto r = check_cs_and_split(v_counts(sc.x_power, sys, budget));
    for (auto& row : r.rows) row.instance += " " + sys.to_string();
    rep.append(r);
    auto a = admissible(l);
    rep.rows.push_back({"admissible", sys.to_string(), a.admissible ? "admissible" : a.reasons.front(), "admissible",
                        1.0, a.admissible});
  }
  for (const auto& l : {std::vector<unsigned>{2, 4, 4}, std::vector<unsigned>{2, 3, 6}})
    rep.append(check_prop52(sc.x_power, PowerSystem({1, 1, 1}, l), budget));

  const auto a = admissible(std::vector<unsigned>{2, 3, 6, 6});
  rep.rows.push_back({"inadmissible_reason", "l=(2,3,6,6)", a.reasons.front(), "sum 2/3 ≠ 1/2", 1.0,
                      !a.admissible && a.reasons.front() == "sum 2/3 ≠ 1/2"});
  const auto b = admissible(std::vector<unsigned>{2, 4, 12, 12, 12});
  rep.rows.push_back({"inadmissible_reason", "l=(2,4,12,12,12)", b.reasons.front(),
                      "(ii) s = 3 but l_t = 12 < 16", 1.0, !b.admissible && !b.cond_ii});
  const std::vector<unsigned> base{2, 3, 6};
  const bool ext = extend(base, ExtendMode::plus) == std::vector<unsigned>{2, 3, 12, 12} &&
                   extend(base, ExtendMode::star) == std::vector<unsigned>{2, 3, 18, 18, 18};
  rep.rows.push_back({"extend", "l=(2,3,6)", ext ? "ok" : "mismatch", "ok", 1.0, ext});

  for (const auto& l : {std::vector<unsigned>{2, 4, 4}, std::vector<unsigned>{2, 3, 6}, std::vector<unsigned>{2, 3, 8, 24}}) {
    PowerSystem sys(std::vector<u64>(l.size(), 1), l);
    VRecord v = v_counts(sc.oracle_x, sys, budget);
    u64 v0 = 0, v1 = 0;
    u128 v2 = 0;
    for (u64 n = 1; n <= sc.oracle_x; ++n) {
      u64 r = rep_count(n, sys);
      v0 += r != 0;
      v1 += r;
      v2 += static_cast<u128>(r) * r;
    }
    const bool same = v.V0 == v0 && v.V1 == v1 && v.V2 == v2;
    rep.rows.push_back({"v_counts_oracle", "x=" + std::to_string(sc.oracle_x) + " " + sys.to_string(),
                        u128_to_string(v.V2), u128_to_string(v2), 1.0, same});
  }
}

}  // namespace

CheckReport verify_suite(std::string_view suite, const Budget& budget) {
  const Scale sc = scale_for(budget);
  CheckReport rep;
  const bool all = suite == "core";
  bool any = false;
  if (all || suite == "delta") delta_panel(rep, sc, budget), any = true;
  if (all || suite == "congruence") congruence_panel(rep, sc, budget), any = true;
  if (all || suite == "meanvalue") meanvalue_panel(rep, sc, budget), any = true;
  if (all || suite == "powersums") powersums_panel(rep, sc, budget), any = true;
  if (!any)
    throw PreconditionError("unknown suite '" + std::string(suite) +
                            "' (expected core|delta|congruence|meanvalue|powersums)");
  return rep;
}

}  // namespace powersum
