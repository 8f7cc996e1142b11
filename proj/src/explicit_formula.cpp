#include "totlab/explicit_formula.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "totlab/errors.hpp"
#include "totlab/numeric.hpp"
#include "totlab/parallel.hpp"

namespace totlab::explicit_formula {
namespace {

void require_above_one(double x, const char* op) {
  if (!(x > 1.0) || !std::isfinite(x)) throw DomainError(std::string(op) + ": x must be > 1");
}

void require_trivial_terms(unsigned n_max, const char* op) {
  if (n_max < 1) throw DomainError(std::string(op) + ": n_max must be >= 1");
  if (n_max > kMaxTrivialTerms) throw DomainError(std::string(op) + ": n_max above 31");
}

// x^{1/2 + it} (t may be negative)
Complex critical_power(double x, double t) {
  return std::polar(std::sqrt(x), t * std::log(x));
}

Complex residue_at(double x, Complex rho) {
  const auto derivative = zeta::zeta_prime(rho);
  if (std::abs(derivative.value) < kMinZetaPrime) {
    throw DegenerateZeroError("zeta'(rho) vanishes numerically at t = " +
                              std::to_string(rho.imag()));
  }
  const auto shifted = zeta::zeta(rho - 1.0);
  return critical_power(x, rho.imag()) * shifted.value / (rho * derivative.value);
}

}  // namespace

double main_term(double x) { return 3.0 * x * x / (kPi * kPi); }

double trivial_zero_term(double x, unsigned n) {
  const double odd = zeta::zeta_special(zeta::SpecialKind::kZetaOddNeg, n).value;
  const double prime = zeta::zeta_special(zeta::SpecialKind::kZetaPrimeEvenNeg, n).value;
  return std::pow(x, -2.0 * n) * odd / (2.0 * n * prime);
}

double trivial_zero_term_alt(double x, unsigned n) {
  const double even_next = zeta::zeta(Complex(2.0 * n + 2.0, 0.0)).value.real();
  const double odd_pos = zeta::zeta(Complex(2.0 * n + 1.0, 0.0)).value.real();
  const double sign = n % 2 == 0 ? 1.0 : -1.0;
  const double two_pi = 2.0 * kPi;
  return sign * (2.0 * n + 1.0) * even_next * std::pow(x, -2.0 * n) /
         (two_pi * two_pi * n * (n + 1.0) * odd_pos);
}

double trivial_zero_series(double x, unsigned n_max) {
  require_above_one(x, "trivial_zero_series");
  require_trivial_terms(n_max, "trivial_zero_series");
  // Terms shrink like x^{-2n}; add smallest first.
  double sum = 0.0;
  for (unsigned n = n_max; n >= 1; --n) sum += trivial_zero_term(x, n);
  return sum;
}

double trivial_zero_series_alt(double x, unsigned n_max) {
  require_above_one(x, "trivial_zero_series_alt");
  require_trivial_terms(n_max, "trivial_zero_series_alt");
  double sum = 0.0;
  for (unsigned n = n_max; n >= 1; --n) sum += trivial_zero_term_alt(x, n);
  return sum;
}

double zero_term(double x, const ZetaZero& zero) {
  require_above_one(x, "zero_term");
  return 2.0 * residue_at(x, Complex(0.5, zero.t)).real();
}

double zero_sum(double x, std::span<const ZetaZero> zeros) {
  require_above_one(x, "zero_sum");
  std::vector<double> terms(zeros.size());
  parallel_for(zeros.size(), [&](std::size_t i) { terms[i] = zero_term(x, zeros[i]); });
  CompensatedSum sum;
  for (const double term : terms) sum += term;  // increasing t
  return sum.value();
}

Complex zero_sum_paired(double x, std::span<const ZetaZero> zeros) {
  require_above_one(x, "zero_sum_paired");
  CompensatedSum re, im;
  for (const auto& z : zeros) {
    for (const double t : {z.t, -z.t}) {
      const Complex term = residue_at(x, Complex(0.5, t));
      re += term.real();
      im += term.imag();
    }
  }
  return {re.value(), im.value()};
}

ExplicitEvaluation phi_sum_explicit(double x, std::span<const ZetaZero> zeros, unsigned n_max) {
  require_above_one(x, "phi_sum_explicit");
  if (std::abs(x - std::round(x)) < kIntegerGuard) {
    throw DomainError("phi_sum_explicit: x is an integer; use the exact summatory functions");
  }
  if (n_max > kMaxTrivialTerms) throw DomainError("phi_sum_explicit: n_max above 31");
  ExplicitEvaluation e;
  e.x = x;
  e.main_term = main_term(x);
  e.zero_sum = zeros.empty() ? 0.0 : zero_sum(x, zeros);
  if (n_max > 0) {
    e.trivial_series = trivial_zero_series(x, n_max);
    e.trivial_series_alt = trivial_zero_series_alt(x, n_max);
  }
  e.zeros_used = static_cast<unsigned>(zeros.size());
  e.trivial_terms_used = n_max;
  e.total = (e.main_term + e.constant_term) + e.zero_sum - e.trivial_series;
  return e;
}

OscillationValue oscillation_sum(double x, std::span<const ZetaZero> zeros) {
  require_above_one(x, "oscillation_sum");
  CompensatedSum re, im;
  double height = 0.0;
  for (const auto& z : zeros) {
    for (const double t : {z.t, -z.t}) {
      const Complex term = critical_power(x, t) / Complex(0.5, t);
      re += term.real();
      im += term.imag();
    }
    height = std::max(height, z.t);
  }
  return {x, height, Complex(re.value(), im.value())};
}

double perron_phi(double x, double sigma0, double T, double step) {
  require_above_one(x, "perron_phi");
  if (!(sigma0 >= 2.2)) throw DomainError("perron_phi: sigma0 must be >= 2.2");
  if (!(step > 0.0 && step <= 0.05)) throw DomainError("perron_phi: step must lie in (0, 0.05]");
  if (!(T > 0.0 && T <= 140.0)) throw DomainError("perron_phi: T must lie in (0, 140]");
  const auto panels = static_cast<std::size_t>(std::ceil(T / step));
  const double h = T / static_cast<double>(panels);
  const double log_x = std::log(x);
  // The integrand at conjugate points is conjugate, so the line integral over
  // [-T, T] is (1/pi) times the integral of the real part over [0, T].
  std::vector<double> f(panels + 1);
  parallel_for(panels + 1, [&](std::size_t i) {
    const Complex s(sigma0, h * static_cast<double>(i));
    const Complex ratio = zeta::zeta(s - 1.0).value / zeta::zeta(s).value;
    f[i] = (ratio * std::exp(s * log_x) / s).real();
  });
  CompensatedSum sum;
  sum += 0.5 * f.front();
  for (std::size_t i = 1; i < panels; ++i) sum += f[i];
  sum += 0.5 * f.back();
  return sum.value() * h / kPi;
}

}  // namespace totlab::explicit_formula
