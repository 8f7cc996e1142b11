#pragma once

#include <cstdint>
#include <span>

#include "totlab/numeric.hpp"
#include "totlab/rational.hpp"

// Fractional-part sums and their Moebius twists at integer arguments, plus
// the five-term split of Phi(x) obtained from floor(t) = t - ((t)).
//
// At integer x every fractional part is ((x/d)) = (x mod d)/d, a rational with
// a small denominator, so all exact routines sum small fractions into one big
// rational. Non-integer arguments are not accepted here.
namespace totlab::twisted {

inline constexpr std::uint64_t kExactLimit = 10'000'000;
inline constexpr std::uint64_t kDecomposeLimit = 1'000'000;
inline constexpr std::uint64_t kFloatLimit = 1'000'000'000;
inline constexpr unsigned kMaxMoment = 4;

// ((x/d)) in lowest terms.
struct FracValue {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;

  friend bool operator==(const FracValue&, const FracValue&) = default;
};

FracValue frac_part(std::uint64_t x, std::uint64_t d);
Rational to_rational(const FracValue& f);

struct DecompositionBreakdown {
  std::uint64_t x = 0;
  Rational term_main;      //  x^2/2 * sum mu(d)/d^2
  Rational term_half;      //  x/2   * sum mu(d)/d
  Rational term_weighted;  // -x     * sum mu(d)((x/d))/d
  Rational term_frac;      // -1/2   * sum mu(d)((x/d))
  Rational term_sq;        //  1/2   * sum mu(d)((x/d))^2
  Rational total;
};

Rational frac_part_sum(std::uint64_t x);                 // sum ((x/n))
double frac_part_sum_float(std::uint64_t x);
double frac_part_weighted_sum(std::uint64_t x);          // sum ((x/n))/n
Rational mobius_frac_sum(std::uint64_t x);               // sum mu(n)((x/n))
double mobius_frac_sum_float(std::uint64_t x);
Rational mobius_frac_weighted_sum(std::uint64_t x);      // sum mu(n)((x/n))/n
double mobius_frac_weighted_sum_float(std::uint64_t x);
Rational mobius_frac_moment(std::uint64_t x, unsigned k);  // sum mu(n)((x/n))^k
Rational phi_frac_sum(std::uint64_t x);                  // sum phi(n)((x/n))
DecompositionBreakdown decompose_phi_sum(std::uint64_t x);

// Right-hand sides of the exact identities each sum must satisfy.
Rational harmonic_number(std::uint64_t x);
Rational frac_part_sum_identity(std::uint64_t x);         // x*H_x - D(x)
Rational mobius_frac_sum_identity(std::uint64_t x);       // x*sum mu(n)/n - 1
Rational phi_frac_sum_identity(std::uint64_t x);          // x*sum phi(n)/n - x(x+1)/2

// The five decomposition sums in double-double precision, from a caller
// supplied table mu[d-1] = mu(d), d = 1..x. Used where many nearby x are
// evaluated against one sieve.
struct FloatSums {
  DoubleDouble mu_over_d2;      // sum mu(d)/d^2
  DoubleDouble mu_over_d;       // sum mu(d)/d
  DoubleDouble mu_frac_over_d;  // sum mu(d)((x/d))/d
  DoubleDouble mu_frac;         // sum mu(d)((x/d))
  DoubleDouble mu_frac_sq;      // sum mu(d)((x/d))^2
};

FloatSums float_sums(std::uint64_t x, std::span<const std::int8_t> mu);
FloatSums float_sums(std::uint64_t x);

}  // namespace totlab::twisted
