#include "hooley/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hooley/error.hpp"

namespace hooley {

u64 powmod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

u64 gcd_u64(u64 a, u64 b) { return std::gcd(a, b); }

u64 checked_mul(u64 a, u64 b) {
  u64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw DomainError("64-bit overflow in product");
  return r;
}

u64 lcm_u64(u64 a, u64 b) {
  if (a == 0 || b == 0) return 0;
  return checked_mul(a / std::gcd(a, b), b);
}

u64 checked_pow(u64 base, unsigned exp) {
  u64 r = 1;
  for (unsigned i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

namespace {

bool miller_rabin_witness(u64 n, u64 a, u64 d, unsigned s) {
  u64 x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (unsigned r = 1; r < s; ++r) {
    x = mulmod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set is deterministic for n < 3.3e24.
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (miller_rabin_witness(n, a, d, s)) return false;
  }
  return true;
}

std::vector<u64> primes_up_to(u64 n) {
  std::vector<u64> primes;
  if (n < 2) return primes;
  std::vector<bool> composite(n + 1, false);
  for (u64 i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    if (i <= n / i) {
      for (u64 j = i * i; j <= n; j += i) composite[j] = true;
    }
  }
  return primes;
}

Factorization factorize_trial(u64 n) {
  if (n == 0) throw DomainError("cannot factorize 0");
  Factorization f;
  auto take = [&](u64 p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) f.push_back({p, e});
  };
  take(2);
  take(3);
  for (u64 p = 5; p <= n / p; p += 6) {
    take(p);
    take(p + 2);
  }
  if (n > 1) f.push_back({n, 1});
  return f;
}

unsigned big_omega(const Factorization& f) {
  unsigned total = 0;
  for (const auto& pp : f) total += pp.e;
  return total;
}

u64 kernel(const Factorization& f) {
  u64 k = 1;
  for (const auto& pp : f) k *= pp.p;
  return k;
}

u64 divisor_count(const Factorization& f) {
  u64 t = 1;
  for (const auto& pp : f) t *= pp.e + 1;
  return t;
}

unsigned valuation(u64 n, u64 p) {
  if (n == 0) throw DomainError("valuation of 0 is infinite");
  if (p < 2) throw DomainError("valuation base must be >= 2");
  unsigned v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

void sorted_divisors_into(std::span<const PrimePower> f, std::vector<u64>& out) {
  out.clear();
  out.push_back(1);
  for (const auto& pp : f) {
    const std::size_t base = out.size();
    u64 power = 1;
    for (unsigned k = 1; k <= pp.e; ++k) {
      power *= pp.p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * power);
    }
  }
  std::sort(out.begin(), out.end());
}

std::vector<u64> sorted_divisors(const Factorization& f) {
  std::vector<u64> out;
  sorted_divisors_into(f, out);
  return out;
}

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && (r > n / r)) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

u64 iroot(u64 n, unsigned k) {
  if (k == 0) throw DomainError("zeroth root");
  if (k == 1 || n < 2) return n;
  u64 r = static_cast<u64>(std::pow(static_cast<long double>(n), 1.0L / k));
  auto fits = [&](u64 c) {
    u128 acc = 1;
    for (unsigned i = 0; i < k; ++i) {
      acc *= c;
      if (acc > n) return false;
    }
    return true;
  };
  while (r > 0 && !fits(r)) --r;
  while (fits(r + 1)) ++r;
  return r;
}

}  // namespace hooley
