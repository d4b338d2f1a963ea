#pragma once

// Representations n = sum_j c_j m_j^l_j with all m_j >= 1, their moment
// sums V_0, V_1, V_2 and the admissibility conditions on exponent tuples.

#include <gmpxx.h>

#include <span>
#include <string>
#include <vector>

#include "hooley/arith.hpp"
#include "hooley/budget.hpp"
#include "hooley/report.hpp"

namespace hooley {

class PowerSystem {
 public:
  // c = (c_0..c_t), l = (l_0..l_t); l nondecreasing, all entries >= 1.
  PowerSystem(std::vector<u64> c, std::vector<unsigned> l);

  const std::vector<u64>& c() const noexcept { return c_; }
  const std::vector<unsigned>& l() const noexcept { return l_; }
  unsigned t() const noexcept { return static_cast<unsigned>(c_.size() - 1); }
  unsigned L() const noexcept { return l_.back(); }
  mpq_class delta() const;  // sum_{j>=1} 1/l_j
  // (c_1..c_t), (l_1..l_t); needs t >= 1.
  PowerSystem tail() const;
  std::string to_string() const;

 private:
  std::vector<u64> c_;
  std::vector<unsigned> l_;
};

struct VRecord {
  u64 x = 0;
  u64 V0 = 0;
  u64 V1 = 0;
  u128 V2 = 0;
  u128 V2_eq = 0;   // ordered pairs with equal value and m_0 = n_0
  u128 V2_neq = 0;
  friend bool operator==(const VRecord&, const VRecord&) = default;
};

std::string u128_to_string(u128 v);

// r(n; c, l). Depth-first over the coordinates with the largest exponents,
// the last one solved by an integer root.
u64 rep_count(u64 n, const PowerSystem& sys);

// |{m : sum_j c_j m_j^l_j <= x}| by direct depth-first enumeration.
u64 lattice_count(u64 x, const PowerSystem& sys);

struct VCountOptions {
  std::vector<u64> checkpoints;  // extra records; x itself is always last
  u64 shard_len = u64{1} << 22;
  unsigned threads = 0;          // 0 = budget.threads
};

// The tail values sum_{j>=1} c_j m_j^l_j are tabulated once with their
// multiplicities; n is processed in value shards [lo, hi] and every head
// c_0 m_0^l_0 adds the tail table onto its shard window. Work is about
// V_1(x) + x. BudgetError when x > budget.max_x or V_1(x) > budget.max_x;
// its hint reads "x<=N" with the largest feasible N.
std::vector<VRecord> v_counts(u64 x, const PowerSystem& sys, const VCountOptions& opts,
                              const Budget& budget = {});
VRecord v_counts(u64 x, const PowerSystem& sys, const Budget& budget = {});

// V_1^2 <= V_0 V_2, V_2 = V_2^= + V_2^!=, V_0 <= V_1 <= V_2, V_0 <= x.
CheckReport check_cs_and_split(const VRecord& rec);

// V_2^=(x; c, l) <= (x/c_0)^(1/l_0) V_2(x; c_1..c_t, l_1..l_t), decided
// exactly as c_0 lhs^l_0 <= x V_2^l_0.
CheckReport check_prop52(u64 x, const PowerSystem& sys, const Budget& budget = {});

struct AdmissibilityReport {
  std::vector<unsigned> l;
  unsigned s = 0;
  bool l0_is_2 = false;
  bool l1_in_3_4 = false;
  bool sum_is_half = false;
  bool cond_i = false;    // 1 <= s <= 3
  bool cond_ii = false;   // l_t >= 16 if s = 3
  bool cond_iii = false;  // sum_{j>=r} 1/l_j <= 1/l_{r-1}, 1 <= r <= t-s+1
  bool admissible = false;
  std::vector<std::string> reasons;  // one per failed condition
};

// PreconditionError when t < 2 or l is not nondecreasing.
AdmissibilityReport admissible(std::span<const unsigned> l);

enum class ExtendMode { plus, star };

// plus (needs s = 1): l_t -> 2l_t, 2l_t. star (needs l_t >= 6): l_t -> 3l_t three times.
std::vector<unsigned> extend(std::span<const unsigned> l, ExtendMode mode);

struct GrowthRow {
  VRecord v;
  double frakS = 0.0;
  double r1 = 0.0;  // V_0 frakS(x) / x
  double r2 = 0.0;  // V_0 (log log x)^(5/2) / x
  double r3 = 0.0;  // V_2^!= / (x^(2 delta) frakS(x))
};

struct GrowthTable {
  std::vector<GrowthRow> rows;
  CheckReport checks;  // V_0 <= x per row, V_0 nondecreasing
};

// Grid points must be >= 3 (log log x > 0); duplicates are dropped.
GrowthTable growth_table(const PowerSystem& sys, std::vector<u64> grid, const Budget& budget = {});
std::string growth_csv(const GrowthTable& table);

}  // namespace hooley
