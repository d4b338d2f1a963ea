#pragma once

// Solution counts of polynomial congruences: rho^+ of a single polynomial,
// the joint rho^+ and rho^# of a family R_1..R_r, and the inequality checkers
// built on them.

#include <gmpxx.h>

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hooley/arith.hpp"
#include "hooley/budget.hpp"
#include "hooley/multipoly.hpp"
#include "hooley/report.hpp"

namespace hooley {

class ModulusVector {
 public:
  explicit ModulusVector(std::vector<u64> s);

  const std::vector<u64>& values() const noexcept { return s_; }
  std::size_t r() const noexcept { return s_.size(); }
  u64 operator[](std::size_t h) const { return s_.at(h); }

  u64 product() const noexcept { return product_; }        // wp s
  u64 kernel_of_product() const noexcept { return kappa_; } // kappa(wp s)
  u64 lcm() const noexcept { return lcm_; }
  u64 K() const noexcept { return K_; }                     // lcm(s_h kappa(s_h))
  // Primes of wp s with their largest exponent over h.
  const Factorization& primes() const noexcept { return primes_; }

 private:
  std::vector<u64> s_;
  u64 product_ = 1, kappa_ = 1, lcm_ = 1, K_ = 1;
  Factorization primes_;
};

enum class CountMethod { bruteforce, crt, prime_power_lift };
std::string to_string(CountMethod m);

struct CongruenceCount {
  u64 value = 0;
  u64 period = 1;
  CountMethod method = CountMethod::bruteforce;
};

// bruteforce: one scan of the whole period. crt: a full scan per prime power,
// combined by CRT. automatic: per prime power by digit lifting, combined by CRT.
enum class RhoMethod { automatic, bruteforce, crt };

// |{xi in [1, s]^t : T(xi) = 0 mod s}|.
CongruenceCount rho_plus(const MultiPoly& T, u64 s, RhoMethod method = RhoMethod::automatic,
                         const Budget& budget = {});

// |{xi in [1, wp s]^t : R_h(xi) = 0 mod s_h for all h}|.
CongruenceCount rho_vector_plus(std::span<const MultiPoly> R, const ModulusVector& s,
                                RhoMethod method = RhoMethod::automatic, const Budget& budget = {});

// |{xi in [1, K(s)]^t : s_h || R_h(xi), (R_h(xi)/s_h, wp s) = 1 for all h}|.
// a || 0 holds only for a = 1. count.period is K(s).
CongruenceCount rho_sharp(std::span<const MultiPoly> R, const ModulusVector& s,
                          RhoMethod method = RhoMethod::automatic, const Budget& budget = {});

// Residues xi mod p^(E+1), E = max e_h, with v_p(R_h(xi)) = e_h for every h.
// rho^# is the product of these over the primes of wp s.
u64 rho_sharp_local(std::span<const MultiPoly> R, u64 p, std::span<const unsigned> e,
                    RhoMethod method = RhoMethod::automatic, const Budget& budget = {});

struct DensityCheck {
  mpq_class sharp_density;   // rho^#(a) / K(a)^t
  mpq_class period_density;  // literal conditions, exact integer values, one period
  u64 K = 1;
  bool pass = false;
};

DensityCheck density_identity_check(std::span<const MultiPoly> R, const ModulusVector& a,
                                    const Budget& budget = {});

// rho^+(p) <= g p^(t-1) for all primes p <= p_max. T must be primitive.
CheckReport check_schwartz_zippel(const MultiPoly& T, u64 p_max, const Budget& budget = {});

// rho^+(p^nu) <= g^t (nu+1)^(t-1) p^(nu(t - 1/g) + v_p(c(T))/g) for primes
// p <= p_max, 1 <= nu <= nu_max, p^(nu t) within budget. The verdict is taken
// by raising both sides to the power g, which makes them integers.
CheckReport check_stewart_bound(const MultiPoly& T, u64 p_max, unsigned nu_max, const Budget& budget = {});

// For Q = sum c_j X_j^l_j - sum c_j Y_j^l_j (j = 1..t): monitors
// |rho^+(p) - p^(2t-1)| / p^t and asserts rho^+(p^nu) <= L p^((2t-1) nu).
CheckReport check_korobov_estimate(std::span<const u64> c, std::span<const unsigned> l, u64 p_max,
                                   const Budget& budget = {});

struct SiftedCount {
  u64 count = 0;
  double rhs = 0.0;          // sieve main term with unit constant
  double bound_ratio = 0.0;  // count / rhs
};

// n in prod (x_j, x_j + y_j], a_h || R_h(n), (R_h(n)/a_h, wp a) = 1, and no
// prime g < p <= z with p not dividing wp a divides Q(n).
SiftedCount sifted_count(const FactoredSystem& sys, const ModulusVector& a, std::span<const i64> x,
                         std::span<const u64> y, u64 z, const Budget& budget = {});

std::pair<double, double> alpha_parameters(double alpha, double epsilon1, unsigned g);

}  // namespace hooley
