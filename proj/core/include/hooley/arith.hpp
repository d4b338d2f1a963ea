#pragma once

// Elementary exact integer arithmetic shared by every module.

#include <cstdint>
#include <span>
#include <vector>

namespace hooley {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

struct PrimePower {
  u64 p;
  unsigned e;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

using Factorization = std::vector<PrimePower>;

inline u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}
u64 powmod(u64 base, u64 exp, u64 m);

// Reduces an arbitrary signed value into [0, m).
inline u64 reduce_signed(i64 v, u64 m) {
  i128 r = static_cast<i128>(v) % static_cast<i128>(m);
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

u64 gcd_u64(u64 a, u64 b);
// Throws DomainError on overflow.
u64 lcm_u64(u64 a, u64 b);
u64 checked_mul(u64 a, u64 b);
u64 checked_pow(u64 base, unsigned exp);

// Deterministic Miller-Rabin for all 64-bit inputs.
bool is_prime(u64 n);

// All primes p <= n, ascending (plain Eratosthenes).
std::vector<u64> primes_up_to(u64 n);

// Trial-division factorization; fine for oracles and small inputs.
Factorization factorize_trial(u64 n);

unsigned big_omega(const Factorization& f);      // Omega(n), with multiplicity
u64 kernel(const Factorization& f);              // kappa(n), product of distinct primes
u64 divisor_count(const Factorization& f);       // tau(n)
unsigned valuation(u64 n, u64 p);                // v_p(n); v_p(0) is rejected

// All positive divisors in increasing order.
std::vector<u64> sorted_divisors(const Factorization& f);
// Same, writing into a reusable buffer.
void sorted_divisors_into(std::span<const PrimePower> f, std::vector<u64>& out);

u64 isqrt(u64 n);
// Largest r with r^k <= n.
u64 iroot(u64 n, unsigned k);

}  // namespace hooley
