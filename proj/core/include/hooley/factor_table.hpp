#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "hooley/arith.hpp"

namespace hooley {

// Smallest-prime-factor table for the integers of [lo, hi].
//
// Entry spf(n) is the least prime p <= sqrt(hi) dividing n, or the sentinel 0
// when there is none; in that case n is 1 or a prime. When lo == 1 the table
// is complete and factorization is pure lookup. For a segment with lo > 1 the
// cofactor left after removing spf(n) may fall outside the segment and is
// finished by trial division over the sieving primes.
class FactorTable {
 public:
  static constexpr std::uint32_t kNoSmallFactor = 0;

  FactorTable() = default;
  FactorTable(u64 lo, u64 hi, std::vector<std::uint32_t> spf);

  u64 lo() const noexcept { return lo_; }
  u64 hi() const noexcept { return hi_; }
  std::size_t size() const noexcept { return spf_.size(); }
  bool contains(u64 n) const noexcept { return n >= lo_ && n <= hi_; }

  // Raw entry; 0 means "1 or prime".
  std::uint32_t raw(u64 n) const;
  // Least prime factor of n >= 2 (n itself when n is prime).
  u64 smallest_prime_factor(u64 n) const;
  std::span<const std::uint32_t> entries() const noexcept { return spf_; }

  Factorization factorize(u64 n) const;
  unsigned big_omega(u64 n) const { return hooley::big_omega(factorize(n)); }
  u64 kernel(u64 n) const { return hooley::kernel(factorize(n)); }
  u64 divisor_count(u64 n) const { return hooley::divisor_count(factorize(n)); }
  unsigned valuation(u64 n, u64 p) const;

  friend bool operator==(const FactorTable&, const FactorTable&) = default;

 private:
  u64 lo_ = 1;
  u64 hi_ = 0;
  std::vector<std::uint32_t> spf_;
};

// Rejects empty ranges and ranges longer than `max_len` (segment budget).
FactorTable build_factor_table(u64 lo, u64 hi, u64 max_len = 1u << 22);

// Segment cache files: 32-byte header (magic, version, lo, hi, checksum)
// followed by the spf entries as little-endian uint32.
inline constexpr std::uint32_t kCacheMagic = 0x46545348;  // "HSTF" on disk
inline constexpr std::uint32_t kCacheVersion = 1;

void write_factor_cache(const FactorTable& table, const std::filesystem::path& path);
// Throws DomainError on bad magic, version, size or checksum.
FactorTable read_factor_cache(const std::filesystem::path& path);
// Canonical file name for a segment inside a cache directory.
std::filesystem::path factor_cache_path(const std::filesystem::path& dir, u64 lo, u64 hi);
// Loads the segment from `dir` when a valid file exists, otherwise builds and
// stores it. An empty `dir` disables caching.
FactorTable cached_factor_table(const std::filesystem::path& dir, u64 lo, u64 hi,
                                u64 max_len = 1u << 22);

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes);

// Complete factorizations of a short block [lo, lo + len), produced by one
// divide-out sieve pass. Reused across blocks by a single worker.
class BlockFactorizer {
 public:
  explicit BlockFactorizer(std::size_t max_len = 1u << 15);

  // `primes` must contain every prime <= sqrt(lo + len - 1).
  void run(u64 lo, std::size_t len, std::span<const u64> primes);

  u64 lo() const noexcept { return lo_; }
  std::size_t length() const noexcept { return len_; }
  // Factorization of lo + i, ascending primes.
  std::span<const PrimePower> factors(std::size_t i) const {
    return {slots_.data() + i * kSlots, count_[i]};
  }

 private:
  static constexpr std::size_t kSlots = 16;  // distinct primes of any n < 2^64
  std::size_t max_len_;
  u64 lo_ = 0;
  std::size_t len_ = 0;
  std::vector<u64> rest_;
  std::vector<PrimePower> slots_;
  std::vector<std::uint8_t> count_;
};

}  // namespace hooley
