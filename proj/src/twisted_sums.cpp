#include "totlab/twisted_sums.hpp"

#include <numeric>
#include <string>

#include "totlab/arith_core.hpp"
#include "totlab/errors.hpp"
#include "totlab/summatory.hpp"

namespace totlab::twisted {
namespace {

constexpr std::uint64_t kStreamBlock = 1u << 20;

void check_exact(std::uint64_t x, std::uint64_t limit, const char* op) {
  if (x == 0) throw DomainError(std::string(op) + ": x must be >= 1");
  if (x > limit) {
    throw ResourceError(std::string(op) + ": exact mode limited to x <= " + std::to_string(limit));
  }
}

void check_float(std::uint64_t x, const char* op) {
  if (x == 0) throw DomainError(std::string(op) + ": x must be >= 1");
  if (x > kFloatLimit) throw DomainError(std::string(op) + ": x above 10^9");
}

u128 pow_u(std::uint64_t base, unsigned k) {
  u128 r = 1;
  for (unsigned i = 0; i < k; ++i) r *= base;
  return r;
}

i128 pow_i(std::uint64_t base, unsigned k) { return static_cast<i128>(pow_u(base, k)); }

// coeff * ((x/d))^k / d^extra, reduced before powering so the 128-bit leaf
// stays in range for d <= 10^7, k + extra <= 4.
SmallFraction twisted_term(std::int64_t coeff, std::uint64_t x, std::uint64_t d, unsigned k,
                           unsigned extra) {
  const std::uint64_t r = x % d;
  if (r == 0 || coeff == 0) return {0, 1};
  const std::uint64_t g = std::gcd(r, d);
  const std::uint64_t num = r / g;
  const std::uint64_t den = d / g;
  SmallFraction f;
  f.num = coeff * pow_i(num, k);
  f.den = pow_u(den, k) * pow_u(d, extra);
  return f;
}

std::vector<std::int8_t> mu_table(std::uint64_t x) {
  const arith::ArithTable t = arith::sieve_segment(1, x);
  return t.mu;
}

Rational mobius_twisted(std::uint64_t x, const std::vector<std::int8_t>& mu, unsigned k,
                        unsigned extra) {
  return sum_fractions(1, x + 1, [&](std::uint64_t d) {
    return twisted_term(mu[d - 1], x, d, k, extra);
  });
}

Rational mobius_power(std::uint64_t x, const std::vector<std::int8_t>& mu, unsigned power) {
  return sum_fractions(1, x + 1, [&](std::uint64_t d) {
    return SmallFraction{mu[d - 1], pow_u(d, power)};
  });
}

template <typename Visit>
void stream_mu(std::uint64_t x, Visit visit) {
  arith::for_each_segment(1, x, kStreamBlock, [&](const arith::ArithTable& t) {
    for (std::uint64_t n = t.lo; n <= t.hi; ++n) {
      const int m = t.mu_of(n);
      if (m != 0) visit(n, m);
    }
  });
}

}  // namespace

FracValue frac_part(std::uint64_t x, std::uint64_t d) {
  if (d == 0) throw DomainError("frac_part: divisor must be >= 1");
  const std::uint64_t r = x % d;
  if (r == 0) return {0, 1};
  const std::uint64_t g = std::gcd(r, d);
  return {r / g, d / g};
}

Rational to_rational(const FracValue& f) {
  return Rational(BigInt(static_cast<unsigned long>(f.numerator)),
                  BigInt(static_cast<unsigned long>(f.denominator)));
}

Rational frac_part_sum(std::uint64_t x) {
  check_exact(x, kExactLimit, "frac_part_sum");
  return sum_fractions(1, x + 1, [x](std::uint64_t n) { return twisted_term(1, x, n, 1, 0); });
}

double frac_part_sum_float(std::uint64_t x) {
  check_float(x, "frac_part_sum");
  CompensatedSum s;
  for (std::uint64_t n = 1; n <= x; ++n) {
    s += static_cast<double>(x % n) / static_cast<double>(n);
  }
  return s.value();
}

double frac_part_weighted_sum(std::uint64_t x) {
  check_float(x, "frac_part_weighted_sum");
  CompensatedSum s;
  for (std::uint64_t n = 1; n <= x; ++n) {
    const double dn = static_cast<double>(n);
    s += static_cast<double>(x % n) / dn / dn;
  }
  return s.value();
}

Rational mobius_frac_sum(std::uint64_t x) {
  check_exact(x, kExactLimit, "mobius_frac_sum");
  return mobius_twisted(x, mu_table(x), 1, 0);
}

double mobius_frac_sum_float(std::uint64_t x) {
  check_float(x, "mobius_frac_sum");
  CompensatedSum s;
  stream_mu(x, [&](std::uint64_t n, int m) {
    s += m * (static_cast<double>(x % n) / static_cast<double>(n));
  });
  return s.value();
}

Rational mobius_frac_weighted_sum(std::uint64_t x) {
  check_exact(x, kExactLimit, "mobius_frac_weighted_sum");
  return mobius_twisted(x, mu_table(x), 1, 1);
}

double mobius_frac_weighted_sum_float(std::uint64_t x) {
  check_float(x, "mobius_frac_weighted_sum");
  CompensatedSum s;
  stream_mu(x, [&](std::uint64_t n, int m) {
    const double dn = static_cast<double>(n);
    s += m * (static_cast<double>(x % n) / dn / dn);
  });
  return s.value();
}

Rational mobius_frac_moment(std::uint64_t x, unsigned k) {
  if (k == 0) throw DomainError("mobius_frac_moment: k must be >= 1");
  if (k > kMaxMoment) throw ResourceError("mobius_frac_moment: k above 4");
  check_exact(x, kExactLimit, "mobius_frac_moment");
  return mobius_twisted(x, mu_table(x), k, 0);
}

Rational phi_frac_sum(std::uint64_t x) {
  check_exact(x, kExactLimit, "phi_frac_sum");
  const arith::ArithTable t = arith::sieve_segment(1, x);
  return sum_fractions(1, x + 1, [&](std::uint64_t n) {
    return twisted_term(static_cast<std::int64_t>(t.phi_of(n)), x, n, 1, 0);
  });
}

DecompositionBreakdown decompose_phi_sum(std::uint64_t x) {
  check_exact(x, kDecomposeLimit, "decompose_phi_sum");
  const auto mu = mu_table(x);
  const Rational rx(static_cast<unsigned long>(x));
  const Rational half(1, 2);

  DecompositionBreakdown b;
  b.x = x;
  b.term_main = rx * rx * half * mobius_power(x, mu, 2);
  b.term_half = rx * half * mobius_power(x, mu, 1);
  b.term_weighted = -rx * mobius_twisted(x, mu, 1, 1);
  b.term_frac = -half * mobius_twisted(x, mu, 1, 0);
  b.term_sq = half * mobius_twisted(x, mu, 2, 0);
  b.total = b.term_main + b.term_half + b.term_weighted + b.term_frac + b.term_sq;
  if (b.total.get_den() != 1) {
    throw InternalError("decompose_phi_sum: total is not an integer at x = " + std::to_string(x));
  }
  return b;
}

Rational harmonic_number(std::uint64_t x) {
  check_exact(x, kExactLimit, "harmonic_number");
  return sum_fractions(1, x + 1, [](std::uint64_t n) { return SmallFraction{1, n}; });
}

Rational frac_part_sum_identity(std::uint64_t x) {
  const Rational rx(static_cast<unsigned long>(x));
  return rx * harmonic_number(x) - Rational(to_big(summatory::divisor_sum(x)));
}

Rational mobius_frac_sum_identity(std::uint64_t x) {
  check_exact(x, kExactLimit, "mobius_frac_sum_identity");
  const Rational rx(static_cast<unsigned long>(x));
  return rx * mobius_power(x, mu_table(x), 1) - 1;
}

Rational phi_frac_sum_identity(std::uint64_t x) {
  const Rational rx(static_cast<unsigned long>(x));
  const Rational tri(to_big(static_cast<i128>(x) * (static_cast<i128>(x) + 1) / 2));
  return rx * summatory::phi_over_n_sum_exact(x) - tri;
}

FloatSums float_sums(std::uint64_t x, std::span<const std::int8_t> mu) {
  if (x == 0) throw DomainError("float_sums: x must be >= 1");
  if (mu.size() < x) throw DomainError("float_sums: mu table shorter than x");
  CompensatedSum s2, s1, w, f, f2;
  for (std::uint64_t d = 1; d <= x; ++d) {
    const int m = mu[d - 1];
    if (m == 0) continue;
    const double dd = static_cast<double>(d);
    // 1/d and r/d as double-doubles so the weighted sums keep full precision.
    const DoubleDouble inv = DoubleDouble(1.0) / DoubleDouble(dd);
    const DoubleDouble frac = DoubleDouble(static_cast<double>(x % d)) / DoubleDouble(dd);
    const DoubleDouble sign(static_cast<double>(m));
    s2 += sign * inv * inv;
    s1 += sign * inv;
    w += sign * frac * inv;
    f += sign * frac;
    f2 += sign * frac * frac;
  }
  return {s2.exact(), s1.exact(), w.exact(), f.exact(), f2.exact()};
}

FloatSums float_sums(std::uint64_t x) {
  check_float(x, "float_sums");
  const auto mu = mu_table(x);
  return float_sums(x, mu);
}

}  // namespace totlab::twisted
