#pragma once

// The Erdos-Hooley Delta function and the mean values built from it.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hooley/arith.hpp"
#include "hooley/budget.hpp"

namespace hooley {

struct DivisorList {
  u64 n;
  std::vector<u64> divisors;  // strictly increasing, 1 ... n
};

DivisorList divisor_list(u64 n);

// Number of divisors d of n with e^u < d <= e^(u+1).
u64 delta(u64 n, double u);
// max over real u of delta(n, u). Throws DomainError for n = 0.
u64 delta(u64 n);

// Window scan over sorted divisors: max_i |{ j : d_i <= d_j < e*d_i }|.
u64 delta_window_scan(std::span<const u64> sorted_divs);

// Independent route: evaluates the divisor count in (e^u, e^(u+1)] at the
// grid u = log d - eps for every divisor d and takes the maximum. Works in
// log space (long double) with no reuse of the window-scan comparison.
u64 delta_grid_max(std::span<const u64> sorted_divs);
u64 delta_grid_count(std::span<const u64> sorted_divs, long double u);

// Exact test of d < e * base, escalating to a 30-digit value of e when the
// double comparison is within the guard band.
bool less_than_e_times(u64 d, u64 base);

struct DeltaMeanRow {
  u64 x;
  u64 S;          // sum_{n<=x} Delta(n)
  double frakS;   // (1/log x) sum_{n<=x} Delta(n)/n
};

struct MeanSumOptions {
  std::vector<u64> checkpoints;   // extra rows; x itself is always last
  u64 segment_size = 1u << 22;
  u64 max_x = 100'000'000;        // budget ceiling, see PartialResultError
  unsigned threads = 1;
  bool reverse_merge = false;     // merge segment partials in reverse order (testing)
};

// Rows for every checkpoint <= x plus x itself, ascending.
std::vector<DeltaMeanRow> delta_mean_sums(u64 x, const MeanSumOptions& opts);
DeltaMeanRow delta_mean_sums(u64 x);

// Reference route for the same sums: divisor sieve plus delta_grid_max.
DeltaMeanRow delta_mean_sums_reference(u64 x);

// (1/log log x)^{5/2} monitor for frakS.
double frak_monitor(const DeltaMeanRow& row);

// sum of Delta(|p + a|) over primes x < p <= x + y.
u64 shifted_prime_delta_sum(u64 x, u64 y, i64 a);

// |{(m, n) : 1 <= m, n <= x, m n = a (mod q)}| by residue-class grouping.
u64 congruence_pair_count(u64 x, u64 q, u64 a);
u64 congruence_pair_count_bruteforce(u64 x, u64 q, u64 a);
// Pairs with m <= m_max and n_lo < n <= n_hi, same grouping.
u64 congruence_pair_count_window(u64 m_max, u64 n_lo, u64 n_hi, u64 q, u64 a);
// sum_{0 <= k <= 2 N x / q} Delta(k q + a): bounds the pairs with m <= x and
// N < n <= 2N, because the admissible n for a fixed product m n lie in a
// window of ratio 2 < e.
u64 congruence_delta_majorant(u64 x, u64 q, u64 a, u64 N);

// Neumaier (improved Kahan) summation.
class CompensatedSum {
 public:
  void add(double v) noexcept;
  void merge(const CompensatedSum& other) noexcept {
    add(other.sum_);
    add(other.comp_);
  }
  double value() const noexcept { return sum_ + comp_; }
  double sum() const noexcept { return sum_; }
  double compensation() const noexcept { return comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace hooley
