#include "hooley/delta.hpp"

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "hooley/error.hpp"
#include "hooley/factor_table.hpp"

namespace hooley {

namespace {

constexpr double kE = 2.718281828459045;
// e truncated to 30 decimals: e30 < e < e30 + 1e-30.
const char* const kE30Digits = "2718281828459045235360287471352";

bool less_than_e_times_exact(u64 d, u64 base) {
  static const mpz_class e30(kE30Digits);
  static const mpz_class scale = [] {
    mpz_class s;
    mpz_ui_pow_ui(s.get_mpz_t(), 10, 30);
    return s;
  }();
  mpz_class lhs = mpz_class(std::to_string(d)) * scale;
  mpz_class lo = e30 * mpz_class(std::to_string(base));
  if (lhs <= lo) return true;
  mpz_class hi = (e30 + 1) * mpz_class(std::to_string(base));
  if (lhs >= hi) return false;
  throw AssertionFailure("e-window comparison undecided at 30 digits for d=" + std::to_string(d) +
                         " base=" + std::to_string(base));
}

inline bool less_than_e_times_fast(u64 d, u64 base) {
  const double bound = kE * static_cast<double>(base);
  const double diff = static_cast<double>(d) - bound;
  if (std::fabs(diff) < 1e-6 * static_cast<double>(base)) return less_than_e_times_exact(d, base);
  return diff < 0;
}

// Decides log(d) > u + offset (offset is 0 or 1), falling back to 256-bit
// MPFR when the long double gap is within 1e-12.
bool log_greater(u64 d, long double logd, double u, unsigned offset) {
  const long double gap = logd - (static_cast<long double>(u) + offset);
  if (std::fabs(static_cast<double>(gap)) > 1e-12) return gap > 0;
  mpfr_t v, t;
  mpfr_init2(v, 256);
  mpfr_init2(t, 256);
  mpz_class dz(std::to_string(d));
  mpfr_set_z(v, dz.get_mpz_t(), MPFR_RNDN);
  mpfr_log(v, v, MPFR_RNDN);
  mpfr_set_d(t, u, MPFR_RNDN);
  mpfr_add_ui(t, t, offset, MPFR_RNDN);
  const int cmp = mpfr_cmp(v, t);
  mpfr_clear(v);
  mpfr_clear(t);
  return cmp > 0;
}

}  // namespace

bool less_than_e_times(u64 d, u64 base) { return less_than_e_times_fast(d, base); }

DivisorList divisor_list(u64 n) {
  if (n == 0) throw DomainError("divisors of 0 are undefined");
  return {n, sorted_divisors(factorize_trial(n))};
}

u64 delta_window_scan(std::span<const u64> d) {
  u64 best = 0;
  std::size_t j = 0;
  const std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (j <= i) j = i + 1;
    const double base = static_cast<double>(d[i]);
    const double bound = kE * base;
    const double guard = 1e-6 * base;
    while (j < n) {
      const double diff = static_cast<double>(d[j]) - bound;
      if (diff < -guard || (diff <= guard && less_than_e_times_exact(d[j], d[i]))) {
        ++j;
      } else {
        break;
      }
    }
    best = std::max<u64>(best, j - i);
  }
  return best;
}

u64 delta_grid_count(std::span<const u64> d, long double u) {
  u64 count = 0;
  const long double upper = u + 1.0L;
  for (u64 v : d) {
    const long double lv = std::log(static_cast<long double>(v));
    if (lv > u && lv <= upper) ++count;
  }
  return count;
}

u64 delta_grid_max(std::span<const u64> d) {
  constexpr long double kEps = 1e-16L;
  std::vector<long double> logs(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) logs[i] = std::log(static_cast<long double>(d[i]));
  u64 best = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const long double u = logs[i] - kEps;
    const long double upper = u + 1.0L;
    u64 count = 0;
    for (long double lv : logs) {
      if (lv > u && lv <= upper) ++count;
    }
    best = std::max(best, count);
  }
  return best;
}

u64 delta(u64 n, double u) {
  if (n == 0) throw DomainError("Delta(0, u) is undefined");
  if (!std::isfinite(u)) throw DomainError("Delta(n, u) needs finite u");
  const auto divs = divisor_list(n).divisors;
  u64 count = 0;
  for (u64 d : divs) {
    const long double ld = std::log(static_cast<long double>(d));
    if (log_greater(d, ld, u, 0) && !log_greater(d, ld, u, 1)) ++count;
  }
  return count;
}

u64 delta(u64 n) {
  if (n == 0) throw DomainError("Delta(0) is undefined");
  return delta_window_scan(divisor_list(n).divisors);
}

void CompensatedSum::add(double v) noexcept {
  const double t = sum_ + v;
  if (std::fabs(sum_) >= std::fabs(v)) {
    comp_ += (sum_ - t) + v;
  } else {
    comp_ += (v - t) + sum_;
  }
  sum_ = t;
}

namespace {

struct Unit {
  u64 lo;
  u64 hi;
  bool checkpoint;
};

struct UnitResult {
  u64 S = 0;
  CompensatedSum weighted;
};

void process_unit(const Unit& unit, std::span<const u64> primes, BlockFactorizer& fz,
                  std::vector<u64>& divs, UnitResult& out) {
  constexpr std::size_t kBlock = 1u << 15;
  for (u64 lo = unit.lo; lo <= unit.hi; lo += kBlock) {
    const std::size_t len = static_cast<std::size_t>(std::min<u64>(kBlock, unit.hi - lo + 1));
    fz.run(lo, len, primes);
    for (std::size_t i = 0; i < len; ++i) {
      sorted_divisors_into(fz.factors(i), divs);
      const u64 dv = delta_window_scan(divs);
      out.S += dv;
      out.weighted.add(static_cast<double>(dv) / static_cast<double>(lo + i));
    }
  }
}

}  // namespace

std::vector<DeltaMeanRow> delta_mean_sums(u64 x, const MeanSumOptions& opts) {
  if (x < 2) throw PreconditionError("delta_mean_sums: x must be >= 2");
  if (opts.segment_size == 0) throw PreconditionError("delta_mean_sums: zero segment size");

  u64 limit = x;
  bool partial = false;
  if (x > opts.max_x) {
    limit = opts.max_x / opts.segment_size * opts.segment_size;
    partial = true;
  }

  std::vector<u64> cuts;
  for (u64 c : opts.checkpoints) {
    if (c >= 2 && c < x && c <= limit) cuts.push_back(c);
  }
  if (!partial) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Unit> units;
  {
    std::size_t ci = 0;
    u64 lo = 1;
    while (lo <= limit) {
      u64 seg_end = std::min(limit, (lo - 1) / opts.segment_size * opts.segment_size + opts.segment_size);
      u64 hi = seg_end;
      bool cp = false;
      while (ci < cuts.size() && cuts[ci] < lo) ++ci;
      if (ci < cuts.size() && cuts[ci] <= seg_end) {
        hi = cuts[ci];
        cp = true;
        ++ci;
      }
      units.push_back({lo, hi, cp});
      lo = hi + 1;
    }
  }

  const std::vector<u64> primes = primes_up_to(isqrt(std::max<u64>(limit, 1)));
  std::vector<UnitResult> results(units.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    BlockFactorizer fz;
    std::vector<u64> divs;
    divs.reserve(4096);
    for (std::size_t k; (k = next.fetch_add(1)) < units.size();) {
      process_unit(units[k], primes, fz, divs, results[k]);
    }
  };
  const unsigned nthreads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(units.size())));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::vector<DeltaMeanRow> rows;
  u64 S = 0;
  CompensatedSum total;
  for (std::size_t k = 0; k < units.size(); ++k) {
    S += results[k].S;
    total.merge(results[k].weighted);
    if (units[k].checkpoint) {
      const u64 at = units[k].hi;
      rows.push_back({at, S, total.value() / std::log(static_cast<double>(at))});
    }
  }
  if (partial) {
    throw PartialResultError("delta_mean_sums: x=" + std::to_string(x) + " exceeds budget max_x=" +
                                 std::to_string(opts.max_x) + "; completed up to " + std::to_string(limit),
                             limit, S, total.value());
  }
  if (opts.reverse_merge) {
    CompensatedSum rev;
    for (std::size_t k = units.size(); k-- > 0;) rev.merge(results[k].weighted);
    rows.back().frakS = rev.value() / std::log(static_cast<double>(x));
  }
  return rows;
}

DeltaMeanRow delta_mean_sums(u64 x) { return delta_mean_sums(x, MeanSumOptions{}).back(); }

DeltaMeanRow delta_mean_sums_reference(u64 x) {
  if (x < 2) throw PreconditionError("delta_mean_sums_reference: x must be >= 2");
  if (x > 50'000'000) throw BudgetError("delta_mean_sums_reference: divisor sieve limited to x <= 5e7");
  std::vector<std::uint32_t> count(x + 1, 0);
  for (u64 d = 1; d <= x; ++d)
    for (u64 m = d; m <= x; m += d) ++count[m];
  std::vector<u64> offset(x + 2, 0);
  for (u64 n = 1; n <= x; ++n) offset[n + 1] = offset[n] + count[n];
  std::vector<std::uint32_t> all(offset[x + 1]);
  std::fill(count.begin(), count.end(), 0);
  for (u64 d = 1; d <= x; ++d)
    for (u64 m = d; m <= x; m += d) all[offset[m] + count[m]++] = static_cast<std::uint32_t>(d);
  u64 S = 0;
  CompensatedSum weighted;
  std::vector<u64> divs;
  for (u64 n = 1; n <= x; ++n) {
    divs.assign(all.begin() + static_cast<std::ptrdiff_t>(offset[n]),
                all.begin() + static_cast<std::ptrdiff_t>(offset[n + 1]));
    const u64 dv = delta_grid_max(divs);
    S += dv;
    weighted.add(static_cast<double>(dv) / static_cast<double>(n));
  }
  return {x, S, weighted.value() / std::log(static_cast<double>(x))};
}

double frak_monitor(const DeltaMeanRow& row) {
  const double ll = std::log(std::log(static_cast<double>(row.x)));
  if (!(ll > 0)) return std::nan("");
  return row.frakS / std::pow(ll, 2.5);
}

u64 shifted_prime_delta_sum(u64 x, u64 y, i64 a) {
  if (x < 2) throw PreconditionError("shifted_prime_delta_sum: x must be >= 2");
  if (y < 1) throw PreconditionError("shifted_prime_delta_sum: y must be >= 1");
  if (a == 0) throw PreconditionError("shifted_prime_delta_sum: a must be nonzero");
  u64 total = 0;
  constexpr u64 kSeg = 1u << 20;
  for (u64 lo = x + 1; lo <= x + y; lo += kSeg) {
    const u64 hi = std::min(x + y, lo + kSeg - 1);
    const FactorTable table = build_factor_table(lo, hi, kSeg);
    for (u64 p = lo; p <= hi; ++p) {
      if (p < 2 || table.raw(p) != FactorTable::kNoSmallFactor) continue;
      const i128 shifted = static_cast<i128>(p) + a;
      if (shifted == 0) throw DomainError("shifted_prime_delta_sum: p + a = 0 at p=" + std::to_string(p));
      const u64 m = static_cast<u64>(shifted < 0 ? -shifted : shifted);
      total += delta(m);
    }
  }
  return total;
}

namespace {

void check_pair_args(u64 x, u64 q, u64 a) {
  if (x < 1) throw PreconditionError("congruence_pair_count: x must be >= 1");
  if (q < 1) throw PreconditionError("congruence_pair_count: q must be >= 1");
  if (a < 1 || a > q) throw PreconditionError("congruence_pair_count: need 1 <= a <= q");
  if (std::gcd(a, q) != 1) {
    throw PreconditionError("congruence_pair_count: gcd(a, q) = " + std::to_string(std::gcd(a, q)) + " > 1");
  }
}

u64 inverse_mod(u64 a, u64 m) {
  i128 t = 0, new_t = 1, r = m, new_r = a % m;
  while (new_r != 0) {
    const i128 quotient = r / new_r;
    std::tie(t, new_t) = std::make_pair(new_t, t - quotient * new_t);
    std::tie(r, new_r) = std::make_pair(new_r, r - quotient * new_r);
  }
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

}  // namespace

u64 congruence_pair_count_window(u64 m_max, u64 n_lo, u64 n_hi, u64 q, u64 a) {
  if (q < 1) throw PreconditionError("congruence_pair_count: q must be >= 1");
  if (a < 1 || a > q || std::gcd(a, q) != 1) throw PreconditionError("congruence_pair_count: need gcd(a, q) = 1");
  if (n_hi <= n_lo || m_max == 0) return 0;
  // |{v in [1, hi] : v = r mod q}| for r in [0, q)
  auto upto = [q](u64 hi, u64 r) { return hi / q + ((r >= 1 && r <= hi % q) ? 1 : 0); };
  if (q == 1) return checked_mul(m_max, n_hi - n_lo);
  u128 total = 0;
  for (u64 rn = 1; rn < q; ++rn) {
    const u64 cn = upto(n_hi, rn) - upto(n_lo, rn);
    if (cn == 0 || std::gcd(rn, q) != 1) continue;
    const u64 rm = mulmod(a % q, inverse_mod(rn, q), q);
    total += static_cast<u128>(cn) * upto(m_max, rm);
  }
  if (total > ~u64{0}) throw DomainError("congruence_pair_count: count overflows 64 bits");
  return static_cast<u64>(total);
}

u64 congruence_pair_count(u64 x, u64 q, u64 a) {
  check_pair_args(x, q, a);
  return congruence_pair_count_window(x, 0, x, q, a);
}

u64 congruence_pair_count_bruteforce(u64 x, u64 q, u64 a) {
  check_pair_args(x, q, a);
  u64 total = 0;
  for (u64 m = 1; m <= x; ++m)
    for (u64 n = 1; n <= x; ++n)
      if (mulmod(m, n, q) == a % q) ++total;
  return total;
}

u64 congruence_delta_majorant(u64 x, u64 q, u64 a, u64 N) {
  check_pair_args(x, q, a);
  if (N < 1) throw PreconditionError("congruence_delta_majorant: N must be >= 1");
  const u64 kmax = checked_mul(checked_mul(2, N), x) / q;
  u64 total = 0;
  for (u64 k = 0; k <= kmax; ++k) total += delta(checked_mul(k, q) + a);
  return total;
}

}  // namespace hooley
