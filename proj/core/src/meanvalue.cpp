#include "hooley/meanvalue.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "hooley/congruence.hpp"
#include "hooley/delta.hpp"
#include "hooley/error.hpp"

namespace hooley {

namespace {

std::string tuple_str(std::span<const u64> s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + ")";
}

u64 product_of(std::span<const u64> v) {
  u64 p = 1;
  for (u64 x : v) p = checked_mul(p, x);
  return p;
}

}  // namespace

MultiArithmeticFunction::MultiArithmeticFunction(std::string name, unsigned k, Eval eval)
    : name_(std::move(name)), k_(k), eval_(std::move(eval)) {
  if (k == 0) throw PreconditionError("arithmetic function arity must be >= 1");
}

double MultiArithmeticFunction::operator()(std::span<const u64> n) const {
  if (n.size() != k_) {
    throw PreconditionError(name_ + ": expected " + std::to_string(k_) + " arguments, got " +
                            std::to_string(n.size()));
  }
  for (u64 v : n)
    if (v == 0) throw DomainError(name_ + " is not defined at 0");
  return eval_(n);
}

MultiArithmeticFunction MultiArithmeticFunction::delta() {
  return {"Delta", 1, [](std::span<const u64> n) { return static_cast<double>(hooley::delta(n[0])); }};
}

MultiArithmeticFunction MultiArithmeticFunction::delta_product(unsigned k) {
  return {"DeltaProduct", k, [](std::span<const u64> n) {
            double v = 1.0;
            for (u64 x : n) v *= static_cast<double>(hooley::delta(x));
            return v;
          }};
}

MultiArithmeticFunction MultiArithmeticFunction::constant(unsigned k, double c) {
  if (!(c >= 0.0)) throw PreconditionError("constant function must be nonnegative");
  return {"Const", k, [c](std::span<const u64>) { return c; }};
}

MultiArithmeticFunction MultiArithmeticFunction::identity() {
  return {"Id", 1, [](std::span<const u64> n) { return static_cast<double>(n[0]); }};
}

MultiArithmeticFunction MultiArithmeticFunction::divisor_count(unsigned k) {
  return {"Tau", k, [](std::span<const u64> n) {
            std::map<u64, unsigned> merged;
            for (u64 x : n)
              for (const auto& pp : factorize_trial(x)) merged[pp.p] += pp.e;
            double tau = 1.0;
            for (const auto& [p, e] : merged) tau *= e + 1.0;
            return tau;
          }};
}

MembershipReport class_membership_check(const MultiArithmeticFunction& F, double A, double B, double eps,
                                        std::span<const std::pair<std::vector<u64>, std::vector<u64>>> pairs) {
  const unsigned k = F.arity();
  MembershipReport rep;
  std::vector<u64> ab(k);
  for (const auto& [a, b] : pairs) {
    if (a.size() != k || b.size() != k) throw PreconditionError("class_membership_check: pair arity mismatch");
    for (u64 x : a)
      for (u64 y : b)
        if (gcd_u64(x, y) != 1) {
          throw PreconditionError("class_membership_check: wp a and wp b must be coprime, got a=" + tuple_str(a) +
                                  " b=" + tuple_str(b));
        }
    unsigned omega = 0;
    for (unsigned j = 0; j < k; ++j) {
      ab[j] = checked_mul(a[j], b[j]);
      omega += big_omega(factorize_trial(a[j]));
    }
    const double pa = static_cast<double>(product_of(a));
    const double lhs = F(ab);
    const double rhs = std::min(std::pow(A, omega), B * std::pow(pa, eps)) * F(b);
    ++rep.checked;
    if (lhs > rhs * (1.0 + 1e-12)) rep.violations.push_back({a, b, lhs, rhs});
  }
  return rep;
}

std::vector<std::pair<std::vector<u64>, std::vector<u64>>> coprime_pair_panel(unsigned k, std::size_t samples,
                                                                               u64 max_component,
                                                                               std::uint64_t seed) {
  if (max_component < 1) throw PreconditionError("coprime_pair_panel: max_component must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<u64> d(1, max_component);
  std::vector<std::pair<std::vector<u64>, std::vector<u64>>> out;
  out.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    std::vector<u64> a(k), b(k);
    for (auto& v : b) v = d(rng);
    for (auto& v : a) {
      bool ok = false;
      for (int tries = 0; tries < 64 && !ok; ++tries) {
        v = d(rng);
        ok = std::all_of(b.begin(), b.end(), [&](u64 y) { return gcd_u64(v, y) == 1; });
      }
      if (!ok) v = 1;
    }
    out.emplace_back(std::move(a), std::move(b));
  }
  return out;
}

MembershipReport class_membership_sample(const MultiArithmeticFunction& F, double A, double B, double eps,
                                         std::size_t samples, u64 max_component, std::uint64_t seed) {
  if (samples < 1) throw PreconditionError("class_membership_sample: samples must be >= 1");
  const auto panel = coprime_pair_panel(F.arity(), samples, max_component, seed);
  return class_membership_check(F, A, B, eps, panel);
}

GBound g_bounded(const MultiArithmeticFunction& F, std::span<const u64> a, u64 search_cap, const Budget& budget) {
  const unsigned k = F.arity();
  if (a.size() != k) throw PreconditionError("g_bounded: a has the wrong arity");
  if (search_cap < 1) throw PreconditionError("g_bounded: search_cap must be >= 1");
  u128 volume = 1;
  for (unsigned j = 0; j < k && volume <= budget.max_enum; ++j) volume *= search_cap;
  if (volume > budget.max_enum) {
    throw BudgetError("g_bounded: search box exceeds max_enum = " + std::to_string(budget.max_enum));
  }
  const u64 pa = product_of(a);
  GBound best{-1.0, {}};
  std::vector<u64> b(k, 1), ab(k);
  while (true) {
    bool coprime = true;
    for (u64 v : b) coprime = coprime && gcd_u64(v, pa) == 1;
    if (coprime) {
      const double fb = F(b);
      if (fb != 0.0) {
        for (unsigned j = 0; j < k; ++j) ab[j] = checked_mul(a[j], b[j]);
        const double ratio = F(ab) / fb;
        if (ratio > best.value) best = {ratio, b};
      }
    }
    unsigned j = 0;
    while (j < k && b[j] == search_cap) b[j++] = 1;
    if (j == k) break;
    ++b[j];
  }
  if (best.witness.empty()) throw DomainError("g_bounded: no admissible b with F(b) != 0 below the cap");
  return best;
}

LiftedFunction::LiftedFunction(MultiArithmeticFunction base, std::vector<std::vector<unsigned>> gamma)
    : base_(std::move(base)), gamma_(std::move(gamma)) {
  if (gamma_.size() != base_.arity()) {
    throw PreconditionError("lift: gamma has " + std::to_string(gamma_.size()) + " rows, F has arity " +
                            std::to_string(base_.arity()));
  }
  r_ = static_cast<unsigned>(gamma_.front().size());
  if (r_ == 0) throw PreconditionError("lift: gamma must have at least one column");
  for (const auto& row : gamma_)
    if (row.size() != r_) throw PreconditionError("lift: gamma rows differ in length");
  for (unsigned h = 0; h < r_; ++h) {
    unsigned gh = 0;
    for (const auto& row : gamma_) gh += row[h];
    max_gamma_h_ = std::max(max_gamma_h_, gh);
  }
}

std::vector<u64> LiftedFunction::s_prime(std::span<const u64> s) const {
  if (s.size() != r_) throw PreconditionError("lift: expected " + std::to_string(r_) + " arguments");
  std::vector<u64> out(gamma_.size(), 1);
  for (std::size_t j = 0; j < gamma_.size(); ++j)
    for (unsigned h = 0; h < r_; ++h) out[j] = checked_mul(out[j], checked_pow(s[h], gamma_[j][h]));
  return out;
}

u64 LiftedFunction::s_double_prime(std::span<const u64> s) const { return product_of(s_prime(s)); }

MultiArithmeticFunction LiftedFunction::as_function() const {
  LiftedFunction self = *this;
  return {base_.name() + "^", r_, [self](std::span<const u64> s) { return self(s); }};
}

LiftedFunction lift(const MultiArithmeticFunction& F, std::vector<std::vector<unsigned>> gamma) {
  return LiftedFunction(F, std::move(gamma));
}

namespace {

// Weight rho^#(s)/K(s)^t as a product of per-prime local densities, each
// computed once.
class SharpWeights {
 public:
  SharpWeights(std::span<const MultiPoly> R, unsigned t, const Budget& budget) : R_(R), t_(t), budget_(budget) {}

  mpq_class operator()(std::span<const u64> s) {
    std::map<u64, std::vector<unsigned>> local;
    for (std::size_t h = 0; h < s.size(); ++h) {
      for (const auto& pp : factorize_trial(s[h])) {
        auto& e = local[pp.p];
        if (e.empty()) e.assign(s.size(), 0);
        e[h] = pp.e;
      }
    }
    mpq_class w = 1;
    for (auto& [p, e] : local) {
      auto key = std::make_pair(p, e);
      auto it = memo_.find(key);
      if (it == memo_.end()) {
        const unsigned E = *std::max_element(e.begin(), e.end());
        const u64 count = rho_sharp_local(R_, p, e, RhoMethod::automatic, budget_);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), p, static_cast<unsigned long>(E + 1) * t_);
        mpq_class d(mpz_class(std::to_string(count)), den);
        d.canonicalize();
        it = memo_.emplace(std::move(key), d).first;
      }
      w *= it->second;
      if (w == 0) break;
    }
    return w;
  }

 private:
  std::span<const MultiPoly> R_;
  unsigned t_;
  const Budget& budget_;
  std::map<std::pair<u64, std::vector<unsigned>>, mpq_class> memo_;
};

// Calls f(s) for every ordered r-tuple with product exactly n.
template <class F>
void ordered_factorizations(u64 n, unsigned r, std::vector<u64>& s, unsigned pos, const F& f) {
  if (pos + 1 == r) {
    s[pos] = n;
    f(s);
    return;
  }
  for (u64 d : sorted_divisors(factorize_trial(n))) {
    s[pos] = d;
    ordered_factorizations(n / d, r, s, pos + 1, f);
  }
}

// Calls f(s) for every r-tuple with product <= v, lexicographically.
template <class F>
void tuples_below(u64 v, unsigned r, std::vector<u64>& s, unsigned pos, const F& f) {
  for (u64 d = 1; d <= v; ++d) {
    s[pos] = d;
    if (pos + 1 == r)
      f(s);
    else
      tuples_below(v / d, r, s, pos + 1, f);
  }
}

}  // namespace

std::vector<double> e_sum_table(std::span<const MultiPoly> R, const LiftedFunction& Fhat, u64 v_max, unsigned t,
                                EnumerationOrder order, const Budget& budget) {
  if (R.empty() || R.size() != Fhat.r()) throw PreconditionError("e_sum: need one polynomial R_h per lifted variable");
  for (const auto& p : R)
    if (p.nvars() != t) throw PreconditionError("e_sum: t must equal the variable count of every R_h");
  if (v_max < 1) throw PreconditionError("e_sum: v must be >= 1");
  const unsigned r = Fhat.r();
  SharpWeights weight(R, t, budget);
  u64 visited = 0;

  auto term = [&](std::span<const u64> s) -> double {
    if (++visited > budget.max_enum) {
      throw BudgetError("e_sum: more than max_enum = " + std::to_string(budget.max_enum) +
                        " tuples; blocked at s=" + tuple_str(s));
    }
    const mpq_class w = weight(s);
    if (w == 0) return 0.0;
    return Fhat(s) * w.get_d();
  };

  std::vector<double> table(v_max);
  std::vector<u64> s(r);
  if (order == EnumerationOrder::by_product) {
    CompensatedSum acc;
    for (u64 n = 1; n <= v_max; ++n) {
      ordered_factorizations(n, r, s, 0, [&](std::span<const u64> tuple) { acc.add(term(tuple)); });
      table[n - 1] = acc.value();
    }
  } else {
    std::vector<CompensatedSum> bucket(v_max);
    tuples_below(v_max, r, s, 0, [&](std::span<const u64> tuple) {
      const double v = term(tuple);
      bucket[product_of(tuple) - 1].add(v);
    });
    CompensatedSum acc;
    for (u64 n = 0; n < v_max; ++n) {
      acc.merge(bucket[n]);
      table[n] = acc.value();
    }
  }
  return table;
}

double e_sum(std::span<const MultiPoly> R, const LiftedFunction& Fhat, u64 v, unsigned t, EnumerationOrder order,
             const Budget& budget) {
  return e_sum_table(R, Fhat, v, t, order, budget).back();
}

double euler_product(const MultiPoly& Q, unsigned t, u64 z, const Budget& budget) {
  if (Q.nvars() != t) throw PreconditionError("euler_product: t must equal the variable count of Q");
  const unsigned g = Q.degree();
  long double log_sum = 0.0L;
  for (u64 p : primes_up_to(z)) {
    if (p <= g) continue;
    const u64 rho = rho_plus(Q, p, RhoMethod::bruteforce, budget).value;
    const long double frac = static_cast<long double>(rho) / std::pow(static_cast<long double>(p), t);
    if (frac >= 1.0L) {
      throw DomainError("euler_product: factor 1 - rho(p)/p^t <= 0 at p=" + std::to_string(p));
    }
    log_sum += std::log1p(-frac);
  }
  return static_cast<double>(std::exp(log_sum));
}

Theorem31Comparison theorem31_compare(const FactoredSystem& sys, const MultiArithmeticFunction& F,
                                      std::span<const i64> x, std::span<const u64> y, std::optional<u64> z_bound,
                                      std::optional<u64> sx, const Budget& budget) {
  const unsigned t = sys.nvars();
  if (F.arity() != sys.k()) throw PreconditionError("theorem31_compare: F arity must equal k");
  if (x.size() != t) throw PreconditionError("theorem31_compare: x must have length t");
  const bool full_box = y.empty();
  if (!full_box && y.size() != t) throw PreconditionError("theorem31_compare: y must have length t");

  std::vector<i64> lo(t);
  std::vector<u64> len(t);
  u64 volume = 1;
  i64 max_x = 0;
  u64 sum_x = 0;
  for (unsigned j = 0; j < t; ++j) {
    if (x[j] < (full_box ? 1 : 0)) throw PreconditionError("theorem31_compare: x_j out of range");
    lo[j] = full_box ? 1 : x[j] + 1;
    len[j] = full_box ? static_cast<u64>(x[j]) : y[j];
    if (len[j] == 0) throw PreconditionError("theorem31_compare: empty box (y_j = 0)");
    if (static_cast<i128>(lo[j]) + len[j] > std::numeric_limits<i64>::max())
      throw DomainError("theorem31_compare: box exceeds 64-bit range");
    volume = checked_mul(volume, len[j]);
    max_x = std::max(max_x, x[j]);
    sum_x += static_cast<u64>(x[j]);
  }
  if (volume > budget.max_box) {
    throw BudgetError("theorem31_compare: box volume " + std::to_string(volume) + " exceeds max_box " +
                      std::to_string(budget.max_box));
  }

  Theorem31Comparison out;
  std::vector<ExactEvaluator> evs;
  for (const auto& q : sys.Qs) evs.emplace_back(q);
  std::vector<i64> n(t);
  std::vector<u64> off(t, 0), vals(sys.k());
  CompensatedSum lhs;
  while (true) {
    for (unsigned j = 0; j < t; ++j) n[j] = lo[j] + static_cast<i64>(off[j]);
    bool zero = false;
    for (std::size_t j = 0; j < evs.size(); ++j) {
      const mpz_class v = abs(evs[j](n));
      if (v == 0) {
        zero = true;
        break;
      }
      if (!v.fits_ulong_p()) throw DomainError("theorem31_compare: |Q_j(n)| exceeds 64 bits");
      vals[j] = v.get_ui();
    }
    if (zero) {
      out.flagged = true;
      ++out.zero_points;
      if (out.zero_examples.size() < 8) out.zero_examples.push_back(n);
    } else {
      lhs.add(F(vals));
    }
    unsigned j = 0;
    while (j < t && ++off[j] == len[j]) off[j++] = 0;
    if (j == t) break;
  }
  out.lhs = lhs.value();

  out.sx = sx.value_or(sum_x);
  out.z = z_bound.value_or(static_cast<u64>(max_x));
  if (out.sx < 1) throw PreconditionError("theorem31_compare: sx must be >= 1");
  const LiftedFunction Fhat = lift(F, sys.gamma);
  out.e_r = e_sum(sys.Rs, Fhat, out.sx, t, EnumerationOrder::by_product, budget);
  out.euler = euler_product(sys.product(), t, out.z, budget);
  out.rhs = static_cast<double>(volume) * out.e_r * out.euler;
  out.ratio = out.rhs > 0 ? out.lhs / out.rhs : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace hooley
