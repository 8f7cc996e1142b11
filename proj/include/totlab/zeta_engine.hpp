#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "totlab/rational.hpp"

// Riemann zeta on a bounded region of the complex plane, Bernoulli numbers
// and the closed-form special values, and zero location on the critical
// line through the Hardy Z function. All zeros are taken as 1/2 + it.
namespace totlab::zeta {

using Complex = std::complex<double>;

inline constexpr unsigned kBernoulliMax = 64;
inline constexpr unsigned kCorrectionTerms = 12;
inline constexpr unsigned kMinTruncation = 20;
// Accuracy contract: |Im s| <= kMaxImag and Re s >= kMinReal. Euler-Maclaurin
// covers Re s >= kReflectBelow directly; left of it the functional equation
// maps s to 1 - s.
inline constexpr double kMaxImag = 150.0;
inline constexpr double kMinReal = -45.0;
inline constexpr double kReflectBelow = -1.0;
inline constexpr double kHardyMin = 2.0;
inline constexpr double kHardyMax = 150.0;
inline constexpr double kGridStep = 0.05;
inline constexpr double kBracketWidth = 1e-8;

struct ComplexEvalResult {
  Complex value;
  double est_error = 0.0;  // heuristic absolute error bound
};

enum class Source { kLocated, kLoaded };

struct ZetaZero {
  unsigned index = 0;  // 1-based rank by ordinate
  double t = 0.0;
  Source source = Source::kLocated;
};

// B_0 .. B_64 with B_1 = -1/2.
const std::vector<Rational>& bernoulli_table();
Rational bernoulli(unsigned n);

ComplexEvalResult zeta(Complex s);
ComplexEvalResult zeta_prime(Complex s);

// Central difference of zeta() with step h, Richardson-extrapolated over h
// and h/2. An evaluation route independent of zeta_prime(). The default
// step balances the h^4 truncation against rounding in zeta().
Complex zeta_prime_numeric(Complex s, double h = 1e-4);

enum class SpecialKind { kZetaEvenPos, kZetaOddNeg, kZetaPrimeEvenNeg };

struct SpecialValue {
  // kZetaOddNeg: the exact value. kZetaEvenPos: the rational r with
  // zeta(2n) = r * pi^(2n). kZetaPrimeEvenNeg: unused (the value involves
  // zeta(2n+1)), has_rational is false.
  Rational rational;
  bool has_rational = false;
  unsigned pi_power = 0;
  double value = 0.0;
};

// kZetaEvenPos(n) = zeta(2n), n >= 1; kZetaOddNeg(n) = zeta(-2n-1), n >= 0;
// kZetaPrimeEvenNeg(n) = zeta'(-2n), n >= 1. Requires 2n + 2 <= 64.
SpecialValue zeta_special(SpecialKind kind, unsigned n);

Complex log_gamma(Complex z);  // continuous branch, Re z > 0
Complex digamma(Complex z);    // Re z > 0

double riemann_siegel_theta(double t);
double hardy_z(double t);

std::vector<ZetaZero> find_zeros(double t_max);

std::vector<ZetaZero> parse_zeros(std::istream& in);
std::vector<ZetaZero> load_zeros(const std::filesystem::path& path);
void write_zeros(std::ostream& out, const std::vector<ZetaZero>& zeros);

// The 29 ordinates below t = 100 shipped with the build (data/zeros_t100.txt).
std::vector<ZetaZero> default_zeros();

// Smooth part of N(T): (T/2pi) log(T/2pi) - T/2pi + 7/8.
double count_zeros_formula(double T);

}  // namespace totlab::zeta
