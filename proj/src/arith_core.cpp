#include "totlab/arith_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "totlab/errors.hpp"
#include "totlab/parallel.hpp"

namespace totlab::arith {
namespace {

std::vector<std::uint32_t> build_primes(std::uint32_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

const std::vector<std::uint32_t>& shared_primes() {
  static const std::vector<std::uint32_t> primes = build_primes(kTrialDivisionBound);
  return primes;
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool miller_rabin_round(std::uint64_t n, std::uint64_t a, std::uint64_t d, unsigned s) {
  a %= n;
  if (a == 0) return true;
  std::uint64_t x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned r = 1; r < s; ++r) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

// Brent's cycle variant of Pollard rho. Returns a nontrivial factor of the
// odd composite n.
std::uint64_t brent_split(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  for (std::uint64_t c = 1;; ++c) {
    auto f = [&](std::uint64_t v) { return (mul_mod(v, v, n) + c) % n; };
    std::uint64_t y = 2, x = 2, ys = 2, q = 1, g = 1;
    constexpr std::uint64_t kBatch = 128;
    std::uint64_t r = 1;
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        const std::uint64_t steps = std::min(kBatch, r - k);
        for (std::uint64_t i = 0; i < steps; ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += steps;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      // The batch overshot; replay one step at a time.
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_large(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const std::uint64_t d = brent_split(n);
  factor_large(d, out);
  factor_large(n / d, out);
}

}  // namespace

std::span<const std::uint32_t> small_primes(std::uint32_t limit) {
  if (limit > kTrialDivisionBound) {
    throw DomainError("small_primes: limit above " + std::to_string(kTrialDivisionBound));
  }
  const auto& primes = shared_primes();
  const auto end = std::upper_bound(primes.begin(), primes.end(), limit);
  return {primes.data(), static_cast<std::size_t>(end - primes.begin())};
}

ArithTable sieve_segment(std::uint64_t lo, std::uint64_t hi, std::uint64_t segment_cap) {
  if (lo < 1) throw DomainError("sieve_segment: lo must be >= 1");
  if (hi < lo) throw DomainError("sieve_segment: hi must be >= lo");
  if (hi > kSieveLimit) throw DomainError("sieve_segment: hi above 10^12");
  const std::uint64_t len = hi - lo + 1;
  if (len > segment_cap) {
    throw ResourceError("sieve_segment: " + std::to_string(len) +
                        " entries exceeds segment cap " + std::to_string(segment_cap));
  }

  ArithTable t;
  t.lo = lo;
  t.hi = hi;
  t.phi.assign(len, 1);
  t.mu.assign(len, 1);
  t.dcount.assign(len, 1);
  std::vector<std::uint64_t> rest(len);
  std::iota(rest.begin(), rest.end(), lo);

  const auto primes = small_primes(static_cast<std::uint32_t>(isqrt(hi)));
  for (const std::uint64_t p : primes) {
    std::uint64_t start = (lo + p - 1) / p * p;
    for (std::uint64_t m = start; m <= hi; m += p) {
      const std::size_t i = m - lo;
      std::uint64_t r = rest[i] / p;
      std::uint64_t pk = 1;
      unsigned e = 1;
      while (r % p == 0) {
        r /= p;
        pk *= p;
        ++e;
      }
      rest[i] = r;
      t.phi[i] *= (p - 1) * pk;
      t.mu[i] = e > 1 ? 0 : static_cast<std::int8_t>(-t.mu[i]);
      t.dcount[i] *= e + 1;
    }
  }
  for (std::size_t i = 0; i < len; ++i) {
    if (rest[i] > 1) {  // one prime factor above sqrt(hi) remains
      t.phi[i] *= rest[i] - 1;
      t.mu[i] = static_cast<std::int8_t>(-t.mu[i]);
      t.dcount[i] *= 2;
    }
  }
  return t;
}

void for_each_segment(std::uint64_t lo, std::uint64_t hi, std::uint64_t block,
                      const std::function<void(const ArithTable&)>& visit) {
  if (hi < lo) return;
  if (block == 0) throw DomainError("for_each_segment: block must be positive");
  const std::uint64_t total = (hi - lo) / block + 1;
  const std::uint64_t batch = std::max<std::uint64_t>(1, worker_count());
  for (std::uint64_t first = 0; first < total; first += batch) {
    const std::uint64_t count = std::min(batch, total - first);
    std::vector<ArithTable> tables(count);
    parallel_for(count, [&](std::size_t j) {
      const std::uint64_t a = lo + (first + j) * block;
      const std::uint64_t b = std::min(hi, a + block - 1);
      tables[j] = sieve_segment(a, b);
    });
    for (const auto& t : tables) visit(t);
  }
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (const std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (n % p == 0) return n == p;
  }
  if (n < 41 * 41) return true;
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Base-2 probable-prime screen first; composites almost always stop here.
  if (!miller_rabin_round(n, 2, d, s)) return false;
  // This base set is deterministic for every n < 2^64.
  for (const std::uint64_t a : {325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull}) {
    if (!miller_rabin_round(n, a, d, s)) return false;
  }
  return true;
}

Factorization factorize(std::uint64_t n) {
  if (n == 0) throw DomainError("factorize: n must be >= 1");
  if (n > kFactorLimit) throw DomainError("factorize: n above 10^18");
  Factorization f;
  f.n = n;
  std::uint64_t rest = n;
  for (const std::uint64_t p : shared_primes()) {
    if (p * p > rest) break;
    if (rest % p != 0) continue;
    unsigned e = 0;
    do {
      rest /= p;
      ++e;
    } while (rest % p == 0);
    f.factors.push_back({p, e});
  }
  if (rest == 1) return f;
  const std::uint64_t bound = kTrialDivisionBound;
  if (rest < bound * bound) {
    // Either trial division ran to sqrt(rest), or every prime below 10^6 was
    // tried; in both cases rest has no smaller factor and is prime.
    f.factors.push_back({rest, 1});
    return f;
  }
  std::vector<std::uint64_t> primes;
  factor_large(rest, primes);
  std::sort(primes.begin(), primes.end());
  for (const std::uint64_t p : primes) {
    if (!f.factors.empty() && f.factors.back().prime == p) {
      ++f.factors.back().exponent;
    } else {
      f.factors.push_back({p, 1});
    }
  }
  return f;
}

std::uint64_t phi_point(std::uint64_t n) {
  std::uint64_t result = n;
  for (const auto& [p, e] : factorize(n).factors) result = result / p * (p - 1);
  return result;
}

BigInt phi_k_point(std::uint64_t n, unsigned k) {
  if (k < 1) throw DomainError("phi_k_point: k must be >= 1");
  const Factorization f = factorize(n);
  BigInt nk;
  mpz_ui_pow_ui(nk.get_mpz_t(), n, k);
  BigInt num = nk;
  BigInt den = 1;
  for (const auto& pe : f.factors) {
    BigInt pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), pe.prime, k);
    num *= pk - 1;
    den *= pk;
  }
  BigInt result;
  mpz_divexact(result.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return result;
}

int mobius_point(std::uint64_t n) {
  const Factorization f = factorize(n);
  for (const auto& pe : f.factors) {
    if (pe.exponent > 1) return 0;
  }
  return f.factors.size() % 2 == 0 ? 1 : -1;
}

std::uint64_t divisor_count_point(std::uint64_t n) {
  std::uint64_t d = 1;
  for (const auto& pe : factorize(n).factors) d *= pe.exponent + 1;
  return d;
}

bool is_prime_power(std::uint64_t n, std::uint64_t phi_n) {
  // n = p^m  =>  n - phi(n) = p^(m-1), so p = n / (n - phi(n)).
  if (n < 2 || phi_n >= n) return false;
  const std::uint64_t gap = n - phi_n;
  if (n % gap != 0) return false;
  const std::uint64_t p = n / gap;
  if (p < 2) return false;
  std::uint64_t m = n;
  while (m % p == 0) m /= p;
  return m == 1;
}

}  // namespace totlab::arith
