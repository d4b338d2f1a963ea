#pragma once

// Arithmetic functions of several variables, the class M_k(A, B, eps)
// growth condition, lifts along an exponent matrix, and the sums E_R(v).

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hooley/arith.hpp"
#include "hooley/budget.hpp"
#include "hooley/multipoly.hpp"

namespace hooley {

class MultiArithmeticFunction {
 public:
  using Eval = std::function<double(std::span<const u64>)>;

  MultiArithmeticFunction(std::string name, unsigned k, Eval eval);

  const std::string& name() const noexcept { return name_; }
  unsigned arity() const noexcept { return k_; }
  // DomainError on a zero argument or wrong arity.
  double operator()(std::span<const u64> n) const;

  static MultiArithmeticFunction delta();                     // Delta(n), k = 1
  static MultiArithmeticFunction delta_product(unsigned k);   // prod_j Delta(n_j)
  static MultiArithmeticFunction constant(unsigned k, double c);
  static MultiArithmeticFunction identity();                  // n, k = 1
  static MultiArithmeticFunction divisor_count(unsigned k);   // tau(n_1 ... n_k)

 private:
  std::string name_;
  unsigned k_;
  Eval eval_;
};

struct ClassViolation {
  std::vector<u64> a, b;
  double lhs;  // F(ab)
  double rhs;  // min{A^Omega(wp a), B (wp a)^eps} F(b)
};

struct MembershipReport {
  std::size_t checked = 0;
  std::vector<ClassViolation> violations;
  bool pass() const noexcept { return violations.empty(); }
};

// Checks F(ab) <= min{A^Omega(wp a), B (wp a)^eps} F(b) on given pairs; pairs
// with (wp a, wp b) > 1 are rejected with PreconditionError.
MembershipReport class_membership_check(const MultiArithmeticFunction& F, double A, double B, double eps,
                                        std::span<const std::pair<std::vector<u64>, std::vector<u64>>> pairs);

// Random coprime pairs with components in [1, max_component].
std::vector<std::pair<std::vector<u64>, std::vector<u64>>> coprime_pair_panel(unsigned k, std::size_t samples,
                                                                               u64 max_component,
                                                                               std::uint64_t seed);

MembershipReport class_membership_sample(const MultiArithmeticFunction& F, double A, double B, double eps,
                                         std::size_t samples, u64 max_component = 1000,
                                         std::uint64_t seed = 1);

struct GBound {
  double value;            // lower bound for G_F(a): the search is capped
  std::vector<u64> witness;
  std::string label = "lower bound (search capped)";
};

GBound g_bounded(const MultiArithmeticFunction& F, std::span<const u64> a, u64 search_cap,
                 const Budget& budget = {});

class LiftedFunction {
 public:
  LiftedFunction(MultiArithmeticFunction base, std::vector<std::vector<unsigned>> gamma);

  unsigned k() const noexcept { return base_.arity(); }
  unsigned r() const noexcept { return r_; }
  const MultiArithmeticFunction& base() const noexcept { return base_; }
  const std::vector<std::vector<unsigned>>& gamma() const noexcept { return gamma_; }
  unsigned max_gamma_h() const noexcept { return max_gamma_h_; }

  std::vector<u64> s_prime(std::span<const u64> s) const;  // s'_j = prod_h s_h^gamma_jh
  u64 s_double_prime(std::span<const u64> s) const;        // prod_h s_h^gamma_h
  double operator()(std::span<const u64> s) const { return base_(s_prime(s)); }
  // Same function viewed as an r-variable MultiArithmeticFunction.
  MultiArithmeticFunction as_function() const;

 private:
  MultiArithmeticFunction base_;
  std::vector<std::vector<unsigned>> gamma_;
  unsigned r_ = 0;
  unsigned max_gamma_h_ = 0;
};

LiftedFunction lift(const MultiArithmeticFunction& F, std::vector<std::vector<unsigned>> gamma);

enum class EnumerationOrder { by_product, lexicographic };

// E_R(v) for v = 1 .. v_max (index v - 1). t must match the variable count
// of the R_h.
std::vector<double> e_sum_table(std::span<const MultiPoly> R, const LiftedFunction& Fhat, u64 v_max, unsigned t,
                                EnumerationOrder order = EnumerationOrder::by_product, const Budget& budget = {});
double e_sum(std::span<const MultiPoly> R, const LiftedFunction& Fhat, u64 v, unsigned t,
             EnumerationOrder order = EnumerationOrder::by_product, const Budget& budget = {});

// prod_{g < p <= z} (1 - rho^+_Q(p) / p^t), accumulated in log space.
double euler_product(const MultiPoly& Q, unsigned t, u64 z, const Budget& budget = {});

struct Theorem31Comparison {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double e_r = 0.0;
  double euler = 0.0;
  u64 sx = 0;
  u64 z = 0;
  bool flagged = false;                  // some Q_j(n) = 0 in the box
  u64 zero_points = 0;                   // such n, left out of lhs
  std::vector<std::vector<i64>> zero_examples;
};

// lhs = sum over x_j < n_j <= x_j + y_j of F(|Q_1(n)|, ..., |Q_k(n)|);
// rhs = wp y * E_R(sx) * euler_product(Q, t, z). An empty y selects the
// full box 1 <= n_j <= x_j with wp x in place of wp y. sx defaults to
// sum_j x_j and z to max_j x_j.
Theorem31Comparison theorem31_compare(const FactoredSystem& sys, const MultiArithmeticFunction& F,
                                      std::span<const i64> x, std::span<const u64> y,
                                      std::optional<u64> z_bound = std::nullopt,
                                      std::optional<u64> sx = std::nullopt, const Budget& budget = {});

}  // namespace hooley
