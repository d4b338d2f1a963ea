#include "hooley/congruence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "hooley/error.hpp"

namespace hooley {

namespace {

constexpr u64 kSaturated = std::numeric_limits<u64>::max();

u64 saturating_pow(u64 base, unsigned exp) {
  u128 v = 1;
  for (unsigned i = 0; i < exp; ++i) {
    v *= base;
    if (v > kSaturated) return kSaturated;
  }
  return static_cast<u64>(v);
}

// Counts residue tuples in [0, period)^t satisfying pred. The first
// coordinate is split across workers; partial counts are integers, so the
// result does not depend on the split.
template <class Pred>
u64 scan_box(unsigned t, u64 period, unsigned threads, const Pred& pred) {
  if (t == 0) return pred(std::span<const u64>{}) ? 1 : 0;
  auto worker = [&](u64 lo, u64 hi) {
    std::vector<u64> res(t, 0);
    u64 count = 0;
    for (u64 a = lo; a < hi; ++a) {
      std::fill(res.begin(), res.end(), 0);
      res[0] = a;
      while (true) {
        count += pred(std::span<const u64>(res)) ? 1 : 0;
        unsigned i = 1;
        while (i < t && ++res[i] == period) res[i++] = 0;
        if (i == t) break;
      }
    }
    return count;
  };
  threads = static_cast<unsigned>(std::min<u64>(std::max(1u, threads), period));
  if (threads == 1 || saturating_pow(period, t) < 4096) return worker(0, period);
  std::vector<u64> partial(threads, 0);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    const u64 lo = period * w / threads, hi = period * (w + 1) / threads;
    pool.emplace_back([&, w, lo, hi] { partial[w] = worker(lo, hi); });
  }
  for (auto& th : pool) th.join();
  u64 total = 0;
  for (u64 v : partial) total += v;
  return total;
}

void require_family(std::span<const MultiPoly> R, std::size_t r) {
  if (R.empty()) throw PreconditionError("need at least one polynomial R_h");
  if (R.size() != r) {
    throw PreconditionError("polynomial family has " + std::to_string(R.size()) + " members but modulus vector has " +
                            std::to_string(r));
  }
  for (const auto& p : R) {
    if (p.nvars() != R.front().nvars()) throw PreconditionError("all R_h must share the variable count");
  }
}

void require_points(u64 cost, const Budget& budget, const std::string& what, const std::string& hint) {
  if (cost > budget.max_points) {
    throw BudgetError(what + " needs " + (cost == kSaturated ? std::string("> 2^64") : std::to_string(cost)) +
                          " residue points, budget max_points = " + std::to_string(budget.max_points),
                      hint);
  }
}

std::string mpz_str(const mpz_class& v) { return v.get_str(); }

std::string real_str(long double v) {
  std::ostringstream o;
  o.precision(17);
  o << static_cast<double>(v);
  return o.str();
}

u64 mod_u(i128 v, u64 m) {
  i128 r = v % static_cast<i128>(m);
  return static_cast<u64>(r < 0 ? r + m : r);
}

u64 abs_mod(i128 v, u64 m) { return static_cast<u64>((v < 0 ? -v : v) % m); }

}  // namespace

ModulusVector::ModulusVector(std::vector<u64> s) : s_(std::move(s)) {
  if (s_.empty()) throw PreconditionError("modulus vector must be nonempty");
  std::map<u64, unsigned> top;
  for (u64 v : s_) {
    if (v == 0) throw DomainError("modulus vector entries must be >= 1");
    product_ = checked_mul(product_, v);
    for (const auto& pp : factorize_trial(v)) top[pp.p] = std::max(top[pp.p], pp.e);
  }
  for (const auto& [p, e] : top) {
    primes_.push_back({p, e});
    kappa_ = checked_mul(kappa_, p);
    lcm_ = checked_mul(lcm_, checked_pow(p, e));
    K_ = checked_mul(K_, checked_pow(p, e + 1));
  }
}

std::string to_string(CountMethod m) {
  switch (m) {
    case CountMethod::bruteforce: return "bruteforce";
    case CountMethod::crt: return "crt";
    case CountMethod::prime_power_lift: return "prime-power-lift";
  }
  return "?";
}

namespace {

// v_p(R(xi)) >= a, or == a when exact.
struct LocalCondition {
  const MultiPoly* poly;
  unsigned a;
  bool exact;
};

unsigned levels_needed(std::span<const LocalCondition> conds) {
  unsigned L = 0;
  for (const auto& c : conds) L = std::max(L, c.a + (c.exact ? 1u : 0u));
  return L;
}

// Full scan of [0, p^L)^t.
u64 local_count_scan(std::span<const LocalCondition> conds, unsigned t, u64 p, const Budget& budget) {
  const unsigned L = levels_needed(conds);
  const u64 q = checked_pow(p, L);
  require_points(saturating_pow(q, t), budget, "local scan mod " + std::to_string(q), "method=auto");
  std::vector<ModularEvaluator> evs;
  std::vector<u64> lo, hi;
  for (const auto& c : conds) {
    evs.emplace_back(*c.poly, q, q);
    lo.push_back(checked_pow(p, c.a));
    hi.push_back(c.exact ? checked_pow(p, c.a + 1) : 0);
  }
  return scan_box(t, q, resolve_threads(budget.threads), [&](std::span<const u64> res) {
    for (std::size_t h = 0; h < evs.size(); ++h) {
      const u64 w = evs[h](res);
      if (w % lo[h] != 0 || (hi[h] && w % hi[h] == 0)) return false;
    }
    return true;
  });
}

// Same count by fixing the base-p digits of xi one level at a time. At level
// j the residue of R(xi) mod p^j is known; a branch is cut as soon as a
// condition fails and closed (all p^(t(L-j)) lifts counted) once every
// condition is decided.
class LiftCounter {
 public:
  LiftCounter(std::span<const LocalCondition> conds, unsigned t, u64 p, const Budget& budget)
      : conds_(conds), t_(t), p_(p), L_(levels_needed(conds)), budget_(budget) {
    q_ = checked_pow(p, L_);
    pw_.push_back(1);
    for (unsigned j = 1; j <= L_; ++j) pw_.push_back(pw_.back() * p);
    for (const auto& c : conds) terms_.push_back(compile(*c.poly));
  }

  u64 run() {
    if (L_ == 0) return 1;
    std::vector<u64> xi(t_, 0);
    return dfs(0, xi);
  }

 private:
  struct Term {
    u64 coef;
    std::vector<std::pair<unsigned, std::uint32_t>> f;
  };

  std::vector<Term> compile(const MultiPoly& T) const {
    std::vector<Term> out;
    const mpz_class mz(std::to_string(q_));
    for (const auto& [e, c] : T.terms()) {
      mpz_class r;
      mpz_fdiv_r(r.get_mpz_t(), c.get_mpz_t(), mz.get_mpz_t());
      Term term{std::stoull(r.get_str()), {}};
      if (term.coef == 0) continue;
      for (unsigned v = 0; v < e.size(); ++v)
        if (e[v]) term.f.emplace_back(v, e[v]);
      out.push_back(std::move(term));
    }
    return out;
  }

  u64 eval(const std::vector<Term>& terms, const std::vector<u64>& xi) const {
    u64 acc = 0;
    for (const auto& t : terms) {
      u64 v = t.coef;
      for (auto [var, e] : t.f) v = mulmod(v, powmod(xi[var], e, q_), q_);
      acc += v;
      if (acc >= q_ || acc < v) acc -= q_;
    }
    return acc;
  }

  // 1 = decided and satisfied, 0 = failed, -1 = still open at this level.
  int status(std::size_t h, u64 w, unsigned level) const {
    const auto& c = conds_[h];
    const unsigned need = std::min(level, c.a);
    if (w % pw_[need] != 0) return 0;
    if (!c.exact) return level >= c.a ? 1 : -1;
    if (level < c.a + 1) return -1;
    return w % pw_[c.a + 1] == 0 ? 0 : 1;
  }

  u64 dfs(unsigned j, std::vector<u64>& xi) {
    // children: xi + p^j d for d in [0, p)^t, decided at level j + 1
    const unsigned level = j + 1;
    std::vector<u64> base = xi, d(t_, 0);
    u64 count = 0;
    while (true) {
      if (++visited_ > budget_.max_points) {
        throw BudgetError("prime-power lift mod " + std::to_string(q_) + " visited more than max_points = " +
                          std::to_string(budget_.max_points));
      }
      for (unsigned i = 0; i < t_; ++i) xi[i] = base[i] + pw_[j] * d[i];
      bool failed = false, open = false;
      for (std::size_t h = 0; h < conds_.size() && !failed; ++h) {
        const int st = status(h, eval(terms_[h], xi) % pw_[level], level);
        failed = st == 0;
        open = open || st < 0;
      }
      if (!failed) {
        if (!open)
          count += checked_pow(pw_[L_ - level], t_);
        else
          count += dfs(level, xi);
      }
      unsigned i = 0;
      while (i < t_ && ++d[i] == p_) d[i++] = 0;
      if (i == t_) break;
    }
    xi = base;
    return count;
  }

  std::span<const LocalCondition> conds_;
  unsigned t_;
  u64 p_;
  unsigned L_;
  const Budget& budget_;
  u64 q_ = 1;
  std::vector<u64> pw_;
  std::vector<std::vector<Term>> terms_;
  u64 visited_ = 0;
};

u64 local_count(std::span<const LocalCondition> conds, unsigned t, u64 p, RhoMethod method, const Budget& budget) {
  if (method == RhoMethod::crt) return local_count_scan(conds, t, p, budget);
  return LiftCounter(conds, t, p, budget).run();
}

CountMethod label(RhoMethod m) { return m == RhoMethod::crt ? CountMethod::crt : CountMethod::prime_power_lift; }

}  // namespace

CongruenceCount rho_plus(const MultiPoly& T, u64 s, RhoMethod method, const Budget& budget) {
  if (s == 0) throw DomainError("rho_plus: s must be >= 1");
  if (T.is_zero()) throw PreconditionError("rho_plus: T must be nonzero");
  const unsigned t = T.nvars();
  const auto fac = factorize_trial(s);

  if (method == RhoMethod::bruteforce) {
    require_points(saturating_pow(s, t), budget, "rho_plus brute force over [1," + std::to_string(s) + "]^t",
                   "method=auto");
    ModularEvaluator ev(T, s, s);
    const u64 c = scan_box(t, s, resolve_threads(budget.threads),
                           [&](std::span<const u64> res) { return ev(res) == 0; });
    return {c, s, CountMethod::bruteforce};
  }
  u64 value = 1;
  for (const auto& pp : fac) {
    const LocalCondition c{&T, pp.e, false};
    value = checked_mul(value, local_count(std::span(&c, 1), t, pp.p, method, budget));
  }
  return {value, s, label(method)};
}

CongruenceCount rho_vector_plus(std::span<const MultiPoly> R, const ModulusVector& s, RhoMethod method,
                                const Budget& budget) {
  require_family(R, s.r());
  const unsigned t = R.front().nvars();
  const u64 scale = checked_pow(s.product() / s.lcm(), t);

  if (method == RhoMethod::bruteforce) {
    const u64 L = s.lcm();
    require_points(saturating_pow(L, t), budget, "rho_vector_plus scan of one lcm period", "method=auto");
    std::vector<ModularEvaluator> evs;
    for (std::size_t h = 0; h < R.size(); ++h) evs.emplace_back(R[h], s[h], L);
    const u64 c = scan_box(t, L, resolve_threads(budget.threads), [&](std::span<const u64> res) {
      for (const auto& ev : evs)
        if (ev(res) != 0) return false;
      return true;
    });
    return {checked_mul(c, scale), s.product(), CountMethod::bruteforce};
  }

  u64 value = 1;
  for (const auto& pp : s.primes()) {
    std::vector<LocalCondition> conds;
    for (std::size_t h = 0; h < R.size(); ++h) {
      const unsigned e = valuation(s[h], pp.p);
      if (e > 0) conds.push_back({&R[h], e, false});
    }
    value = checked_mul(value, local_count(conds, t, pp.p, method, budget));
    if (value == 0) break;
  }
  return {checked_mul(value, scale), s.product(), label(method)};
}

CongruenceCount rho_sharp(std::span<const MultiPoly> R, const ModulusVector& s, RhoMethod method,
                          const Budget& budget) {
  require_family(R, s.r());
  const unsigned t = R.front().nvars();
  const u64 K = s.K();

  if (method == RhoMethod::bruteforce) {
    require_points(saturating_pow(K, t), budget, "rho_sharp scan of [1,K(s)]^t with K=" + std::to_string(K),
                   "method=auto");
    // R_h(xi) mod s_h kappa(wp s) decides both conditions, and divides K.
    const u64 kappa = s.kernel_of_product();
    std::vector<ModularEvaluator> evs;
    for (std::size_t h = 0; h < R.size(); ++h) evs.emplace_back(R[h], checked_mul(s[h], kappa), K);
    const u64 c = scan_box(t, K, resolve_threads(budget.threads), [&](std::span<const u64> res) {
      for (std::size_t h = 0; h < evs.size(); ++h) {
        const u64 w = evs[h](res);
        if (w % s[h] != 0 || gcd_u64(w / s[h], kappa) != 1) return false;
      }
      return true;
    });
    return {c, K, CountMethod::bruteforce};
  }

  u64 value = 1;
  std::vector<unsigned> e(R.size());
  for (const auto& pp : s.primes()) {
    for (std::size_t h = 0; h < R.size(); ++h) e[h] = valuation(s[h], pp.p);
    value = checked_mul(value, rho_sharp_local(R, pp.p, e, method, budget));
    if (value == 0) break;
  }
  return {value, K, label(method)};
}

u64 rho_sharp_local(std::span<const MultiPoly> R, u64 p, std::span<const unsigned> e, RhoMethod method,
                    const Budget& budget) {
  if (R.empty() || e.size() != R.size()) throw PreconditionError("rho_sharp_local: need one exponent per R_h");
  if (method == RhoMethod::bruteforce) method = RhoMethod::crt;
  std::vector<LocalCondition> conds;
  for (std::size_t h = 0; h < R.size(); ++h) conds.push_back({&R[h], e[h], true});
  return local_count(conds, R.front().nvars(), p, method, budget);
}

DensityCheck density_identity_check(std::span<const MultiPoly> R, const ModulusVector& a, const Budget& budget) {
  require_family(R, a.r());
  const unsigned t = R.front().nvars();
  const auto sharp = rho_sharp(R, a, RhoMethod::automatic, budget);
  const u64 K = a.K();
  require_points(saturating_pow(K, t), budget, "density period scan", "");

  std::vector<ExactEvaluator> evs;
  for (const auto& p : R) evs.emplace_back(p);
  // primes of wp a not dividing a_h, per h
  std::vector<std::vector<u64>> outside(R.size());
  for (std::size_t h = 0; h < R.size(); ++h)
    for (const auto& pp : a.primes())
      if (a[h] % pp.p != 0) outside[h].push_back(pp.p);

  // Literal reading: a | v, gcd(a, v/a) = 1, and p does not divide v for
  // the listed primes. Values are exact integers, not residues.
  auto literal_small = [&](i128 v, std::size_t h) {
    const u64 ah = a[h];
    if (mod_u(v, ah) != 0) return false;
    const i128 w = v / static_cast<i128>(ah);
    if (gcd_u64(ah, abs_mod(w, ah)) != 1) return false;
    for (u64 p : outside[h])
      if (mod_u(v, p) == 0) return false;
    return true;
  };
  auto literal_big = [&](const mpz_class& v, std::size_t h) {
    const unsigned long ah = a[h];
    if (!mpz_divisible_ui_p(v.get_mpz_t(), ah)) return false;
    mpz_class w;
    mpz_divexact_ui(w.get_mpz_t(), v.get_mpz_t(), ah);
    if (mpz_gcd_ui(nullptr, w.get_mpz_t(), ah) != 1) return false;
    for (u64 p : outside[h])
      if (mpz_divisible_ui_p(v.get_mpz_t(), p)) return false;
    return true;
  };

  std::vector<i64> pt(t);
  const u64 hits = scan_box(t, K, 1, [&](std::span<const u64> res) {
    for (unsigned i = 0; i < t; ++i) pt[i] = static_cast<i64>(res[i]) + 1;  // [1, K]
    i128 small;
    mpz_class big;
    for (std::size_t h = 0; h < evs.size(); ++h) {
      const bool ok = evs[h].eval(pt, small, big) ? literal_small(small, h) : literal_big(big, h);
      if (!ok) return false;
    }
    return true;
  });

  DensityCheck out;
  out.K = K;
  mpz_class vol;
  mpz_ui_pow_ui(vol.get_mpz_t(), K, t);
  out.sharp_density = mpq_class(mpz_class(std::to_string(sharp.value)), vol);
  out.sharp_density.canonicalize();
  out.period_density = mpq_class(mpz_class(std::to_string(hits)), vol);
  out.period_density.canonicalize();
  out.pass = out.sharp_density == out.period_density;
  return out;
}

CheckReport check_schwartz_zippel(const MultiPoly& T, u64 p_max, const Budget& budget) {
  if (!T.primitive()) throw PreconditionError("check_schwartz_zippel: T must be primitive");
  const unsigned t = T.nvars();
  const unsigned g = T.degree();
  CheckReport rep;
  for (u64 p : primes_up_to(p_max)) {
    const u64 rho = rho_plus(T, p, RhoMethod::bruteforce, budget).value;
    mpz_class rhs = 0;
    if (t >= 1) {
      mpz_ui_pow_ui(rhs.get_mpz_t(), p, t - 1);
      rhs *= g;
    }
    const mpz_class lhs(std::to_string(rho));
    CheckResult row;
    row.check = "schwartz_zippel";
    row.instance = "T=" + T.to_string() + ";p=" + std::to_string(p);
    row.lhs = mpz_str(lhs);
    row.rhs = mpz_str(rhs);
    row.ratio = rhs == 0 ? 0.0 : lhs.get_d() / rhs.get_d();
    row.pass = lhs <= rhs;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

CheckReport check_stewart_bound(const MultiPoly& T, u64 p_max, unsigned nu_max, const Budget& budget) {
  const unsigned t = T.nvars();
  const unsigned g = T.degree();
  if (g == 0 || t == 0) throw PreconditionError("check_stewart_bound: T must be nonconstant");
  const mpz_class content = T.content();
  CheckReport rep;
  for (u64 p : primes_up_to(p_max)) {
    const unsigned vc = static_cast<unsigned>(mpz_remove(mpz_class().get_mpz_t(), content.get_mpz_t(),
                                                         mpz_class(std::to_string(p)).get_mpz_t()));
    for (unsigned nu = 1; nu <= nu_max; ++nu) {
      const u64 q = saturating_pow(p, nu);
      if (saturating_pow(q, t) > budget.max_points) break;
      const u64 rho = rho_plus(T, q, RhoMethod::automatic, budget).value;

      // lhs^g <= g^(t g) (nu+1)^((t-1) g) p^(nu (t g - 1) + v)
      mpz_class lhs_g, a, b, c;
      mpz_ui_pow_ui(lhs_g.get_mpz_t(), rho, g);
      mpz_ui_pow_ui(a.get_mpz_t(), g, static_cast<unsigned long>(t) * g);
      mpz_ui_pow_ui(b.get_mpz_t(), nu + 1, static_cast<unsigned long>(t - 1) * g);
      mpz_ui_pow_ui(c.get_mpz_t(), p, static_cast<unsigned long>(nu) * (t * g - 1) + vc);
      const bool pass = lhs_g <= a * b * c;

      const long double log_rhs = t * std::log(static_cast<long double>(g)) +
                                  (t - 1) * std::log(static_cast<long double>(nu + 1)) +
                                  (nu * (t - 1.0L / g) + static_cast<long double>(vc) / g) *
                                      std::log(static_cast<long double>(p));
      const long double rhs = std::exp(log_rhs);
      CheckResult row;
      row.check = "stewart_bound";
      row.instance = "T=" + T.to_string() + ";p=" + std::to_string(p) + ";nu=" + std::to_string(nu);
      row.lhs = std::to_string(rho);
      row.rhs = real_str(rhs);
      row.ratio = static_cast<double>(rho / rhs);
      row.pass = pass;
      rep.rows.push_back(std::move(row));
    }
  }
  return rep;
}

CheckReport check_korobov_estimate(std::span<const u64> c, std::span<const unsigned> l, u64 p_max,
                                   const Budget& budget) {
  if (c.empty() || c.size() != l.size()) throw PreconditionError("check_korobov_estimate: c and l must match");
  u64 g = 0;
  for (u64 v : c) g = gcd_u64(g, v);
  if (g != 1) throw PreconditionError("check_korobov_estimate: gcd(c_1..c_t) must be 1");
  const auto sys = build_power_system_poly(c, l);
  const MultiPoly& Q = sys.Qs.front();
  const unsigned t = static_cast<unsigned>(c.size());
  const u64 L = *std::max_element(l.begin(), l.end());
  std::string inst;
  for (std::size_t j = 0; j < c.size(); ++j)
    inst += (j ? "," : "") + std::to_string(c[j]) + "x^" + std::to_string(l[j]);

  CheckReport rep;
  for (u64 p : primes_up_to(p_max)) {
    require_points(saturating_pow(p, 2 * t), budget, "check_korobov_estimate at p=" + std::to_string(p), "");
    for (unsigned nu = 1;; ++nu) {
      const u64 q = saturating_pow(p, nu);
      if (saturating_pow(q, 2 * t) > budget.max_points) break;
      const u64 rho = rho_plus(Q, q, RhoMethod::automatic, budget).value;
      const mpz_class lhs(std::to_string(rho));
      if (nu == 1) {
        mpz_class main, scale;
        mpz_ui_pow_ui(main.get_mpz_t(), p, 2 * t - 1);
        mpz_ui_pow_ui(scale.get_mpz_t(), p, t);
        const mpz_class dev = abs(lhs - main);
        CheckResult row;
        row.check = "korobov_main_term";
        row.instance = inst + ";p=" + std::to_string(p);
        row.lhs = mpz_str(lhs);
        row.rhs = mpz_str(main);
        row.ratio = mpq_class(dev, scale).get_d();
        row.pass = true;  // monitored only
        rep.rows.push_back(std::move(row));
      }
      mpz_class rhs;
      mpz_ui_pow_ui(rhs.get_mpz_t(), p, static_cast<unsigned long>(2 * t - 1) * nu);
      rhs *= static_cast<unsigned long>(L);
      CheckResult row;
      row.check = "korobov_power_bound";
      row.instance = inst + ";p=" + std::to_string(p) + ";nu=" + std::to_string(nu);
      row.lhs = mpz_str(lhs);
      row.rhs = mpz_str(rhs);
      row.ratio = mpq_class(lhs, rhs).get_d();
      row.pass = lhs <= rhs;
      rep.rows.push_back(std::move(row));
    }
  }
  return rep;
}

SiftedCount sifted_count(const FactoredSystem& sys, const ModulusVector& a, std::span<const i64> x,
                         std::span<const u64> y, u64 z, const Budget& budget) {
  const unsigned t = sys.nvars();
  require_family(sys.Rs, a.r());
  if (x.size() != t || y.size() != t) throw PreconditionError("sifted_count: x and y must have length t");
  if (z < 1) throw PreconditionError("sifted_count: z must be >= 1");
  u64 volume = 1;
  for (unsigned j = 0; j < t; ++j) {
    if (y[j] == 0) throw PreconditionError("sifted_count: box sides must be >= 1");
    if (static_cast<i128>(x[j]) + y[j] > std::numeric_limits<i64>::max())
      throw DomainError("sifted_count: box exceeds 64-bit range");
    volume = volume > budget.max_box / y[j] + 1 ? kSaturated : volume * y[j];
  }
  if (volume > budget.max_box) {
    throw BudgetError("sifted_count box volume " + std::to_string(volume) + " exceeds max_box " +
                      std::to_string(budget.max_box));
  }
  const unsigned g = sys.degree();
  const u64 wp = a.product();
  std::vector<u64> sieve;
  for (u64 p : primes_up_to(z))
    if (p > g && wp % p != 0) sieve.push_back(p);

  const auto gh = sys.gamma_h();
  std::vector<ExactEvaluator> evs;
  for (const auto& R : sys.Rs) evs.emplace_back(R);

  auto ok_small = [&](i128 v, std::size_t h) {
    if (mod_u(v, a[h]) != 0) return false;
    if (gcd_u64(wp, abs_mod(v / static_cast<i128>(a[h]), wp)) != 1) return false;
    if (gh[h] > 0)
      for (u64 p : sieve)
        if (mod_u(v, p) == 0) return false;
    return true;
  };
  auto ok_big = [&](const mpz_class& v, std::size_t h) {
    if (!mpz_divisible_ui_p(v.get_mpz_t(), a[h])) return false;
    mpz_class w;
    mpz_divexact_ui(w.get_mpz_t(), v.get_mpz_t(), a[h]);
    if (wp != 1 && mpz_gcd_ui(nullptr, w.get_mpz_t(), wp) != 1) return false;
    if (gh[h] > 0)
      for (u64 p : sieve)
        if (mpz_divisible_ui_p(v.get_mpz_t(), p)) return false;
    return true;
  };

  SiftedCount out;
  std::vector<i64> n(t);
  std::vector<u64> k(t, 0);
  while (true) {
    for (unsigned j = 0; j < t; ++j) n[j] = x[j] + 1 + static_cast<i64>(k[j]);
    bool ok = true;
    i128 small;
    mpz_class big;
    for (std::size_t h = 0; ok && h < evs.size(); ++h)
      ok = evs[h].eval(n, small, big) ? ok_small(small, h) : ok_big(big, h);
    out.count += ok;
    unsigned j = 0;
    while (j < t && ++k[j] == y[j]) k[j++] = 0;
    if (j == t) break;
  }

  const auto sharp = rho_sharp(sys.Rs, a, RhoMethod::automatic, budget);
  const MultiPoly Q = sys.product();
  long double rhs = 1.0L;
  for (unsigned j = 0; j < t; ++j) rhs *= static_cast<long double>(y[j]);
  rhs *= static_cast<long double>(sharp.value) / std::pow(static_cast<long double>(a.K()), t);
  for (u64 p : sieve) {
    const u64 rho = rho_plus(Q, p, RhoMethod::bruteforce, budget).value;
    rhs *= 1.0L - static_cast<long double>(rho) / std::pow(static_cast<long double>(p), t);
  }
  out.rhs = static_cast<double>(rhs);
  if (rhs > 0)
    out.bound_ratio = static_cast<double>(out.count / rhs);
  else
    out.bound_ratio = out.count == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  return out;
}

std::pair<double, double> alpha_parameters(double alpha, double epsilon1, unsigned g) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw PreconditionError("alpha must lie in (0, 1]");
  if (!(epsilon1 > 0.0) || !std::isfinite(epsilon1)) throw PreconditionError("epsilon1 must be positive");
  if (g < 1) throw PreconditionError("g must be >= 1");
  return {3.0 * alpha / 25.0, epsilon1 / (6.0 * g)};
}

}  // namespace hooley
