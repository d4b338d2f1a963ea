#include "hooley/factor_table.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hooley/error.hpp"

namespace hooley {

FactorTable::FactorTable(u64 lo, u64 hi, std::vector<std::uint32_t> spf)
    : lo_(lo), hi_(hi), spf_(std::move(spf)) {
  if (lo == 0 || hi < lo || spf_.size() != hi - lo + 1) {
    throw PreconditionError("FactorTable: inconsistent range and entry count");
  }
}

std::uint32_t FactorTable::raw(u64 n) const {
  if (!contains(n)) {
    throw PreconditionError("FactorTable: " + std::to_string(n) + " outside [" +
                            std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
  }
  return spf_[n - lo_];
}

u64 FactorTable::smallest_prime_factor(u64 n) const {
  if (n < 2) throw DomainError("smallest prime factor needs n >= 2");
  std::uint32_t p = raw(n);
  return p == kNoSmallFactor ? n : p;
}

Factorization FactorTable::factorize(u64 n) const {
  if (n == 0) throw DomainError("cannot factorize 0");
  Factorization f;
  if (n == 1) {
    raw(n);
    return f;
  }
  u64 p = smallest_prime_factor(n);
  u64 m = n;
  auto take = [&](u64 q) {
    unsigned e = 0;
    while (m % q == 0) {
      m /= q;
      ++e;
    }
    f.push_back({q, e});
  };
  take(p);
  while (m > 1) {
    if (contains(m)) {
      take(smallest_prime_factor(m));
      continue;
    }
    // Cofactor left the segment: trial divide upward from the last prime.
    u64 q = f.back().p + 1;
    bool found = false;
    for (; q <= m / q; ++q) {
      if (m % q == 0) {
        take(q);
        found = true;
        break;
      }
    }
    if (!found) {
      f.push_back({m, 1});
      m = 1;
    }
  }
  return f;
}

unsigned FactorTable::valuation(u64 n, u64 p) const {
  for (const auto& pp : factorize(n)) {
    if (pp.p == p) return pp.e;
  }
  return 0;
}

FactorTable build_factor_table(u64 lo, u64 hi, u64 max_len) {
  if (lo == 0) throw PreconditionError("build_factor_table: lo must be >= 1");
  if (hi < lo) throw PreconditionError("build_factor_table: empty range");
  if (hi - lo + 1 > max_len) {
    throw BudgetError("build_factor_table: range length " + std::to_string(hi - lo + 1) +
                      " exceeds segment budget " + std::to_string(max_len));
  }
  const u64 root = isqrt(hi);
  if (root > 0xffffffffull) throw DomainError("build_factor_table: hi too large for 32-bit entries");
  std::vector<std::uint32_t> spf(hi - lo + 1, FactorTable::kNoSmallFactor);
  for (u64 p : primes_up_to(root)) {
    u64 start = std::max(p * p, (lo + p - 1) / p * p);
    for (u64 m = start; m <= hi; m += p) {
      auto& slot = spf[m - lo];
      if (slot == FactorTable::kNoSmallFactor) slot = static_cast<std::uint32_t>(p);
    }
  }
  return FactorTable(lo, hi, std::move(spf));
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (auto b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

namespace {

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

template <typename T>
T get_le(const std::uint8_t* p) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(p[i]) << (8 * i);
  return v;
}

constexpr std::size_t kHeaderBytes = 32;

std::vector<std::uint8_t> encode_entries(std::span<const std::uint32_t> spf) {
  std::vector<std::uint8_t> body;
  body.reserve(spf.size() * 4);
  for (auto e : spf) put_le<std::uint32_t>(body, e);
  return body;
}

}  // namespace

void write_factor_cache(const FactorTable& table, const std::filesystem::path& path) {
  std::vector<std::uint8_t> body = encode_entries(table.entries());
  std::vector<std::uint8_t> header;
  put_le<std::uint32_t>(header, kCacheMagic);
  put_le<std::uint32_t>(header, kCacheVersion);
  put_le<std::uint64_t>(header, table.lo());
  put_le<std::uint64_t>(header, table.hi());
  put_le<std::uint64_t>(header, fnv1a64(body));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write cache file " + path.string());
  out.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(body.data()), static_cast<std::streamsize>(body.size()));
  if (!out) throw std::runtime_error("short write to cache file " + path.string());
}

FactorTable read_factor_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open cache file " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < kHeaderBytes) throw DomainError("cache file truncated: " + path.string());
  const std::uint8_t* h = bytes.data();
  if (get_le<std::uint32_t>(h) != kCacheMagic) throw DomainError("bad cache magic: " + path.string());
  if (get_le<std::uint32_t>(h + 4) != kCacheVersion) throw DomainError("unsupported cache version: " + path.string());
  const u64 lo = get_le<std::uint64_t>(h + 8);
  const u64 hi = get_le<std::uint64_t>(h + 16);
  const u64 checksum = get_le<std::uint64_t>(h + 24);
  if (lo == 0 || hi < lo || bytes.size() - kHeaderBytes != (hi - lo + 1) * 4) {
    throw DomainError("cache file size does not match its range: " + path.string());
  }
  std::span<const std::uint8_t> body(bytes.data() + kHeaderBytes, bytes.size() - kHeaderBytes);
  if (fnv1a64(body) != checksum) throw DomainError("cache checksum mismatch: " + path.string());
  std::vector<std::uint32_t> spf(hi - lo + 1);
  for (std::size_t i = 0; i < spf.size(); ++i) spf[i] = get_le<std::uint32_t>(body.data() + 4 * i);
  return FactorTable(lo, hi, std::move(spf));
}

std::filesystem::path factor_cache_path(const std::filesystem::path& dir, u64 lo, u64 hi) {
  std::ostringstream name;
  name << "spf_" << lo << "_" << hi << ".bin";
  return dir / name.str();
}

FactorTable cached_factor_table(const std::filesystem::path& dir, u64 lo, u64 hi, u64 max_len) {
  if (dir.empty()) return build_factor_table(lo, hi, max_len);
  auto path = factor_cache_path(dir, lo, hi);
  if (std::filesystem::exists(path)) {
    try {
      auto table = read_factor_cache(path);
      if (table.lo() == lo && table.hi() == hi) return table;
    } catch (const DomainError&) {
      // stale or corrupt; rebuilt below
    }
  }
  auto table = build_factor_table(lo, hi, max_len);
  std::filesystem::create_directories(dir);
  write_factor_cache(table, path);
  return table;
}

BlockFactorizer::BlockFactorizer(std::size_t max_len)
    : max_len_(max_len), rest_(max_len), slots_(max_len * kSlots), count_(max_len) {}

void BlockFactorizer::run(u64 lo, std::size_t len, std::span<const u64> primes) {
  if (len > max_len_) throw PreconditionError("BlockFactorizer: block longer than capacity");
  if (lo == 0) throw PreconditionError("BlockFactorizer: lo must be >= 1");
  lo_ = lo;
  len_ = len;
  for (std::size_t i = 0; i < len; ++i) rest_[i] = lo + i;
  std::memset(count_.data(), 0, len);
  const u64 hi = lo + len - 1;
  for (u64 p : primes) {
    if (p > hi / p) break;
    u64 first = (lo + p - 1) / p * p;
    for (u64 m = first; m <= hi; m += p) {
      const std::size_t i = m - lo;
      u64 r = rest_[i];
      unsigned e = 0;
      do {
        r /= p;
        ++e;
      } while (r % p == 0);
      rest_[i] = r;
      slots_[i * kSlots + count_[i]++] = {p, e};
    }
  }
  for (std::size_t i = 0; i < len; ++i) {
    if (rest_[i] > 1) slots_[i * kSlots + count_[i]++] = {rest_[i], 1};
  }
}

}  // namespace hooley
