#include <doctest.h>

#include <numeric>
#include <random>

#include "totlab/arith_core.hpp"
#include "totlab/errors.hpp"

using namespace totlab;
using namespace totlab::arith;

namespace {

// Plain trial division, independent of the library's factorizer.
struct Naive {
  std::uint64_t phi = 1;
  int mu = 1;
  std::uint64_t d = 1;
};

Naive naive(std::uint64_t n) {
  Naive r;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    unsigned e = 0;
    std::uint64_t pk = 1;
    while (n % p == 0) n /= p, ++e, pk *= p;
    r.phi *= pk / p * (p - 1);
    r.mu = e > 1 ? 0 : -r.mu;
    r.d *= e + 1;
  }
  if (n > 1) {
    r.phi *= n - 1;
    r.mu = -r.mu;
    r.d *= 2;
  }
  return r;
}

std::uint64_t gcd_count(std::uint64_t n) {
  std::uint64_t c = 0;
  for (std::uint64_t k = 1; k <= n; ++k) c += std::gcd(k, n) == 1;
  return c;
}

}  // namespace

TEST_CASE("sieve_segment on [1, 10]") {
  const auto t = sieve_segment(1, 10);
  CHECK(t.phi == std::vector<std::uint64_t>{1, 1, 2, 2, 4, 2, 6, 4, 6, 4});
  CHECK(t.mu == std::vector<std::int8_t>{1, -1, -1, 0, -1, 1, -1, 0, 0, 1});
  CHECK(t.dcount == std::vector<std::uint32_t>{1, 2, 2, 3, 2, 4, 2, 4, 3, 4});
  const auto one = sieve_segment(1, 1);
  CHECK(one.phi[0] == 1);
  CHECK(one.mu[0] == 1);
  CHECK(one.dcount[0] == 1);
}

TEST_CASE("sieve agrees with factorization and trial division for n <= 10^4") {
  const auto t = sieve_segment(1, 10'000);
  CHECK(t.size() == 10'000);
  for (std::uint64_t n = 1; n <= 10'000; ++n) {
    const Naive r = naive(n);
    REQUIRE(t.phi_of(n) == r.phi);
    REQUIRE(t.mu_of(n) == r.mu);
    REQUIRE(t.d_of(n) == r.d);
    REQUIRE(phi_point(n) == r.phi);
    REQUIRE(mobius_point(n) == r.mu);
    REQUIRE(divisor_count_point(n) == r.d);
    REQUIRE(t.phi_of(n) >= 1);
    REQUIRE(t.phi_of(n) <= n);
    if (n >= 2) REQUIRE((t.phi_of(n) == n - 1) == is_prime(n));
  }
  for (std::uint64_t n = 1; n <= 300; ++n) CHECK(t.phi_of(n) == gcd_count(n));
}

TEST_CASE("sum of phi over divisors is n") {
  const auto t = sieve_segment(1, 10'000);
  std::vector<std::uint64_t> acc(10'001, 0);
  for (std::uint64_t d = 1; d <= 10'000; ++d) {
    for (std::uint64_t m = d; m <= 10'000; m += d) acc[m] += t.phi_of(d);
  }
  for (std::uint64_t n = 1; n <= 10'000; ++n) REQUIRE(acc[n] == n);
}

TEST_CASE("multiplicativity on random coprime pairs") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::uint64_t> u(1, 31'622);
  int checked = 0;
  while (checked < 1000) {
    const std::uint64_t a = u(rng), b = u(rng);
    if (std::gcd(a, b) != 1) continue;
    ++checked;
    REQUIRE(phi_point(a * b) == phi_point(a) * phi_point(b));
    REQUIRE(mobius_point(a * b) == mobius_point(a) * mobius_point(b));
    REQUIRE(divisor_count_point(a * b) == divisor_count_point(a) * divisor_count_point(b));
  }
}

TEST_CASE("segments far from the origin") {
  const std::uint64_t hi = 1'000'000'000'000;
  const auto t = sieve_segment(hi - 300, hi);
  for (std::uint64_t n = t.lo; n <= t.hi; ++n) {
    const Naive r = naive(n);
    REQUIRE(t.phi_of(n) == r.phi);
    REQUIRE(t.mu_of(n) == r.mu);
    REQUIRE(t.d_of(n) == r.d);
  }
  // Streaming in blocks visits the same values in order.
  std::uint64_t next = 1'000'000;
  for_each_segment(1'000'000, 1'010'000, 777, [&](const ArithTable& s) {
    CHECK(s.lo == next);
    for (std::uint64_t n = s.lo; n <= s.hi; ++n) REQUIRE(s.phi_of(n) == naive(n).phi);
    next = s.hi + 1;
  });
  CHECK(next == 1'010'001);
}

TEST_CASE("sieve preconditions") {
  CHECK_THROWS_AS(sieve_segment(0, 10), DomainError);
  CHECK_THROWS_AS(sieve_segment(10, 9), DomainError);
  CHECK_THROWS_AS(sieve_segment(kSieveLimit, kSieveLimit + 1), DomainError);
  CHECK_THROWS_AS(sieve_segment(1, 1000, 999), ResourceError);
}

TEST_CASE("factorize") {
  CHECK(factorize(1).factors.empty());
  CHECK(factorize(12).factors == std::vector<PrimePower>{{2, 2}, {3, 1}});
  CHECK_THROWS_AS(factorize(0), DomainError);
  CHECK_THROWS_AS(factorize(kFactorLimit + 1), DomainError);

  for (const std::uint64_t n :
       {50'000'000'000'021ULL, 999'999'937ULL * 1'000'000'007ULL, 1'000'000'007ULL * 998'244'353ULL,
        (1ULL << 59) - 1, 600'851'475'143ULL, 1'000'000'000'000'000'000ULL,
        999'999'000'001ULL * 7ULL}) {
    const auto f = factorize(n);
    std::uint64_t back = 1;
    for (std::size_t i = 0; i < f.factors.size(); ++i) {
      if (i > 0) CHECK(f.factors[i - 1].prime < f.factors[i].prime);
      CHECK(is_prime(f.factors[i].prime));
      for (unsigned e = 0; e < f.factors[i].exponent; ++e) back *= f.factors[i].prime;
    }
    CHECK(back == n);
  }
}

TEST_CASE("50000000000021 against trial division to the square root") {
  std::uint64_t n = 50'000'000'000'021ULL;
  std::vector<PrimePower> oracle;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    unsigned e = 0;
    while (n % p == 0) n /= p, ++e;
    if (e) oracle.push_back({p, e});
  }
  if (n > 1) oracle.push_back({n, 1});
  CHECK(factorize(50'000'000'000'021ULL).factors == oracle);
}

TEST_CASE("primality") {
  CHECK_FALSE(is_prime(0));
  CHECK_FALSE(is_prime(1));
  CHECK(is_prime(2));
  CHECK(is_prime(1'000'000'007));
  CHECK_FALSE(is_prime(3'215'031'751ULL));  // strong pseudoprime to 2, 3, 5, 7
  CHECK(is_prime(18'446'744'073'709'551'557ULL));
  CHECK_FALSE(is_prime(18'446'744'073'709'551'555ULL));
}

TEST_CASE("phi_k_point") {
  CHECK(phi_k_point(10, 1) == 4);
  CHECK(phi_k_point(97, 1) == 96);
  CHECK(phi_k_point(12, 2) == 96);
  CHECK_THROWS_AS(phi_k_point(12, 0), DomainError);
  // J_2(n) counts pairs (a, b) mod n with gcd(a, b, n) = 1.
  for (std::uint64_t n = 1; n <= 40; ++n) {
    std::uint64_t pairs = 0;
    for (std::uint64_t a = 1; a <= n; ++a) {
      for (std::uint64_t b = 1; b <= n; ++b) pairs += std::gcd(std::gcd(a, b), n) == 1;
    }
    CHECK(phi_k_point(n, 2) == pairs);
  }
}

TEST_CASE("prime power detection from phi") {
  const auto t = sieve_segment(1, 5000);
  for (std::uint64_t n = 2; n <= 5000; ++n) {
    const auto f = factorize(n);
    REQUIRE(is_prime_power(n, t.phi_of(n)) == (f.factors.size() == 1));
  }
  CHECK_FALSE(is_prime_power(1, 1));
}
