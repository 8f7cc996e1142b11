#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "totlab/rational.hpp"

// Pointwise arithmetic functions: phi, mu and d, either sieved over a
// contiguous segment or derived from the factorization of a single argument.
namespace totlab::arith {

inline constexpr std::uint64_t kDefaultSegmentCap = 100'000'000;
inline constexpr std::uint64_t kSieveLimit = 1'000'000'000'000;  // 10^12
inline constexpr std::uint64_t kFactorLimit = 1'000'000'000'000'000'000;  // 10^18
inline constexpr std::uint32_t kTrialDivisionBound = 1'000'000;

// phi(n), mu(n), d(n) for n in [lo, hi].
struct ArithTable {
  std::uint64_t lo = 1;
  std::uint64_t hi = 0;
  std::vector<std::uint64_t> phi;
  std::vector<std::int8_t> mu;
  std::vector<std::uint32_t> dcount;

  std::size_t size() const { return phi.size(); }
  std::uint64_t phi_of(std::uint64_t n) const { return phi[n - lo]; }
  int mu_of(std::uint64_t n) const { return mu[n - lo]; }
  std::uint32_t d_of(std::uint64_t n) const { return dcount[n - lo]; }
};

struct PrimePower {
  std::uint64_t prime = 0;
  unsigned exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
  std::uint64_t n = 1;
  std::vector<PrimePower> factors;  // strictly increasing primes
};

// Primes p <= limit, ascending. Tables up to kTrialDivisionBound are shared.
std::span<const std::uint32_t> small_primes(std::uint32_t limit);

ArithTable sieve_segment(std::uint64_t lo, std::uint64_t hi,
                         std::uint64_t segment_cap = kDefaultSegmentCap);

// Streams [lo, hi] in consecutive segments of at most block entries. Blocks
// are sieved on the worker pool but handed to visit strictly in order.
void for_each_segment(std::uint64_t lo, std::uint64_t hi, std::uint64_t block,
                      const std::function<void(const ArithTable&)>& visit);

bool is_prime(std::uint64_t n);
Factorization factorize(std::uint64_t n);

std::uint64_t phi_point(std::uint64_t n);
BigInt phi_k_point(std::uint64_t n, unsigned k);
int mobius_point(std::uint64_t n);
std::uint64_t divisor_count_point(std::uint64_t n);

// True when n = p^m for a prime p and m >= 1, using only n and phi(n).
bool is_prime_power(std::uint64_t n, std::uint64_t phi_n);

}  // namespace totlab::arith
