#pragma once

#include <span>

#include "totlab/zeta_engine.hpp"

// Truncated explicit formula for Phi(x) at non-integer x:
//
//   Phi(x) = 3x^2/pi^2 + 1/6 + sum_rho x^rho zeta(rho-1) / (rho zeta'(rho))
//          - sum_{n>=1} x^{-2n} zeta(-2n-1) / (2n zeta'(-2n))
//
// built from the residues of zeta(s-1) x^s / (s zeta(s)) at s = 2, 0, rho and
// -2n, and a direct Perron line integral of the same function for comparison.
namespace totlab::explicit_formula {

using zeta::Complex;
using zeta::ZetaZero;

inline constexpr unsigned kDefaultTrivialTerms = 20;
inline constexpr unsigned kMaxTrivialTerms = 31;
inline constexpr double kIntegerGuard = 1e-6;
inline constexpr double kMinZetaPrime = 1e-6;
inline constexpr double kConstantTerm = 1.0 / 6.0;  // zeta(-1) / zeta(0)

struct ExplicitEvaluation {
  double x = 0.0;
  double main_term = 0.0;
  double constant_term = kConstantTerm;
  double zero_sum = 0.0;
  double trivial_series = 0.0;
  // The same series with the coefficient (-1)^n (2n+1) zeta(2n+2) /
  // ((2pi)^2 n(n+1) zeta(2n+1)), kept only for comparison; not in total.
  double trivial_series_alt = 0.0;
  double total = 0.0;
  unsigned zeros_used = 0;
  unsigned trivial_terms_used = 0;
};

struct OscillationValue {
  double x = 0.0;
  double T = 0.0;
  Complex value;
};

double main_term(double x);

// n-th residue term x^{-2n} zeta(-2n-1) / (2n zeta'(-2n)) from the closed
// forms of zeta(-2n-1) and zeta'(-2n).
double trivial_zero_term(double x, unsigned n);
double trivial_zero_term_alt(double x, unsigned n);
double trivial_zero_series(double x, unsigned n_max);
double trivial_zero_series_alt(double x, unsigned n_max);

// 2 Re[x^rho zeta(rho-1) / (rho zeta'(rho))] for rho = 1/2 + it.
double zero_term(double x, const ZetaZero& zero);
double zero_sum(double x, std::span<const ZetaZero> zeros);
// Same sum with each conjugate partner evaluated on its own; the imaginary
// part measures how well the pairing cancels.
Complex zero_sum_paired(double x, std::span<const ZetaZero> zeros);

ExplicitEvaluation phi_sum_explicit(double x, std::span<const ZetaZero> zeros,
                                    unsigned n_max = kDefaultTrivialTerms);

// sum over |rho| <= T of x^rho / rho, both members of each pair included.
OscillationValue oscillation_sum(double x, std::span<const ZetaZero> zeros);

// (1/2 pi i) int_{sigma0 - iT}^{sigma0 + iT} zeta(s-1)/zeta(s) x^s/s ds by the
// trapezoidal rule.
double perron_phi(double x, double sigma0, double T, double step);

}  // namespace totlab::explicit_formula
