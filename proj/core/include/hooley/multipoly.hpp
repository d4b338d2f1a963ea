#pragma once

// Sparse multivariate polynomials with arbitrary-precision integer
// coefficients, and verified factored systems Q = prod Q_j = prod R_h^gamma_h.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hooley/arith.hpp"

namespace hooley {

inline constexpr unsigned kMaxVariables = 16;

using Exponents = std::vector<std::uint32_t>;

// Descending graded-lex order: higher total degree first, then lex-larger.
struct GradedLexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

class MultiPoly {
 public:
  using TermMap = std::map<Exponents, mpz_class, GradedLexGreater>;

  MultiPoly() = default;
  explicit MultiPoly(unsigned nvars);

  static MultiPoly constant(unsigned nvars, const mpz_class& c);
  // X_{index+1}
  static MultiPoly variable(unsigned nvars, unsigned index);
  static MultiPoly monomial(Exponents exps, const mpz_class& c);

  // Canonical text: terms "<coeff> x1^e1 ... xt^et" joined by + / -.
  // nvars = 0 infers the variable count from the largest index seen.
  static MultiPoly parse(std::string_view text, unsigned nvars = 0);
  std::string to_string() const;

  unsigned nvars() const noexcept { return nvars_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t term_count() const noexcept { return terms_.size(); }

  // Total degree; DomainError on the zero polynomial.
  unsigned degree() const;
  unsigned degree_in(unsigned var) const;
  // Positive gcd of coefficients; DomainError on the zero polynomial.
  mpz_class content() const;
  bool primitive() const { return content() == 1; }
  mpz_class max_abs_coefficient() const;

  void add_term(const Exponents& exps, const mpz_class& c);

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const mpz_class& c);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const mpz_class& c) { return a *= c; }
  friend MultiPoly operator*(const mpz_class& c, MultiPoly a) { return a *= c; }
  MultiPoly pow(unsigned e) const;
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

 private:
  void check_same_arity(const MultiPoly& o) const;
  unsigned nvars_ = 0;
  TermMap terms_;
};

struct PolyInspection {
  unsigned degree;
  mpz_class content;
  bool primitive;
};

// (degree, content, primitive); DomainError on the zero polynomial.
PolyInspection poly_inspect(const MultiPoly& T);

// T(point) mod m in [0, m); DomainError for m = 0.
u64 poly_eval_mod(const MultiPoly& T, std::span<const i64> point, u64 m);
// Exact integer value.
mpz_class poly_eval(const MultiPoly& T, std::span<const i64> point);

// T compiled for repeated evaluation modulo a fixed m at residue points.
// Per-variable power tables cover residues [0, table_size).
class ModularEvaluator {
 public:
  ModularEvaluator(const MultiPoly& T, u64 m, u64 table_size);
  // terms_ points into rows_, so copies would dangle
  ModularEvaluator(const ModularEvaluator&) = delete;
  ModularEvaluator& operator=(const ModularEvaluator&) = delete;
  ModularEvaluator(ModularEvaluator&&) noexcept = default;
  ModularEvaluator& operator=(ModularEvaluator&&) noexcept = default;
  u64 modulus() const noexcept { return m_; }
  // residues[i] in [0, table_size)
  u64 operator()(std::span<const u64> residues) const;

 private:
  struct Term {
    u64 coef;
    std::vector<std::pair<unsigned, const u64*>> factors;  // (var, power row)
  };
  u64 m_;
  std::vector<std::vector<u64>> rows_;  // one row per (var, exponent) in use
  std::vector<Term> terms_;
};

// Exact integer values at integer points: 128-bit fast path, GMP fallback
// on overflow. Holds a reference to T.
class ExactEvaluator {
 public:
  explicit ExactEvaluator(const MultiPoly& T);
  // true with `small` set, or false with `big` set.
  bool eval(std::span<const i64> pt, i128& small, mpz_class& big) const;
  mpz_class operator()(std::span<const i64> pt) const;

 private:
  struct Term {
    i128 coef;
    std::vector<std::pair<unsigned, std::uint32_t>> factors;
  };
  bool eval_small(std::span<const i64> pt, i128& out) const;

  const MultiPoly* T_;
  std::vector<Term> terms_;
  bool small_ = true;
};

// Q = prod_j Q_j = prod_h R_h^{gamma_h}, with Q_j = prod_h R_h^{gamma_jh}.
struct FactoredSystem {
  std::vector<MultiPoly> Qs;
  std::vector<MultiPoly> Rs;
  std::vector<std::vector<unsigned>> gamma;  // k x r

  FactoredSystem() = default;
  FactoredSystem(std::vector<MultiPoly> qs, std::vector<MultiPoly> rs,
                 std::vector<std::vector<unsigned>> g);

  std::size_t k() const noexcept { return Qs.size(); }
  std::size_t r() const noexcept { return Rs.size(); }
  unsigned nvars() const;
  std::vector<unsigned> gamma_h() const;
  // deg Q = sum_j deg Q_j
  unsigned degree() const;
  MultiPoly product() const;
};

struct VerificationReport {
  bool pass = false;
  std::vector<std::string> checks;       // human-readable list of what passed
  std::string irreducibility = "asserted by caller";
};

// Exact multiplication checks of every identity; throws MismatchError naming
// "j=<index>" or "h=<index>" (1-based) on the first failure.
VerificationReport verify_factored_form(const FactoredSystem& sys);

// Sigma c_j X_j^{l_j} - Sigma c_j Y_j^{l_j} in 2t variables (X first), with c
// divided by its gcd; k = r = 1, gamma = [[1]].
FactoredSystem build_power_system_poly(std::span<const u64> c, std::span<const unsigned> l);

}  // namespace hooley
