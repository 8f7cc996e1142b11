#include "totlab/zeta_engine.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "totlab/errors.hpp"
#include "totlab/numeric.hpp"
#include "totlab/parallel.hpp"

namespace totlab::zeta {
namespace {

constexpr double kEps = 2.220446049250313e-16;
constexpr unsigned kStirlingTerms = 10;
constexpr double kStirlingRadius = 15.0;

std::vector<Rational> build_bernoulli(unsigned n_max) {
  // sum_{j=0}^{m} C(m+1, j) B_j = 0 for m >= 1, solved for B_m.
  std::vector<Rational> b(n_max + 1);
  b[0] = 1;
  for (unsigned m = 1; m <= n_max; ++m) {
    Rational acc = 0;
    BigInt binom = 1;  // C(m+1, j), starting at j = 0
    for (unsigned j = 0; j < m; ++j) {
      acc += Rational(binom) * b[j];
      binom = binom * (m + 1 - j) / (j + 1);
    }
    b[m] = -acc / Rational(static_cast<unsigned long>(m + 1));
  }
  return b;
}

// B_{2k} / (2k)! for k = 1 .. kCorrectionTerms + 1 (the last feeds the error
// estimate).
const std::array<double, kCorrectionTerms + 2>& em_coefficients() {
  static const auto coeffs = [] {
    std::array<double, kCorrectionTerms + 2> c{};
    BigInt fact = 1;
    for (unsigned k = 1; k <= kCorrectionTerms + 1; ++k) {
      fact *= (2 * k - 1) * (2 * k);
      c[k] = Rational(bernoulli(2 * k) / Rational(fact)).get_d();
    }
    return c;
  }();
  return coeffs;
}

// sin(pi x) and cos(pi x) for real x, exact zeros at the integers.
double sin_pi(double x) {
  double r = std::fmod(x, 2.0);
  if (r < 0) r += 2.0;
  if (r == 0.0 || r == 1.0) return 0.0;
  if (r == 0.5) return 1.0;
  if (r == 1.5) return -1.0;
  return std::sin(kPi * r);
}

double cos_pi(double x) { return sin_pi(x + 0.5); }

// sin(pi s / 2) and cos(pi s / 2).
Complex sin_half_pi(Complex s) {
  const double a = s.real() / 2.0;
  const double b = kPi * s.imag() / 2.0;
  return {sin_pi(a) * std::cosh(b), cos_pi(a) * std::sinh(b)};
}

Complex cos_half_pi(Complex s) {
  const double a = s.real() / 2.0;
  const double b = kPi * s.imag() / 2.0;
  return {cos_pi(a) * std::cosh(b), -sin_pi(a) * std::sinh(b)};
}

// n^{-s} with the modulus from pow() so that real integer exponents stay
// exact.
Complex inverse_power(double n, Complex s) {
  const double mag = std::pow(n, -s.real());
  if (s.imag() == 0.0) return {mag, 0.0};
  const double phase = -s.imag() * std::log(n);
  return {mag * std::cos(phase), mag * std::sin(phase)};
}

class ComplexAccumulator {
 public:
  void add(Complex v) {
    re_ += v.real();
    im_ += v.imag();
    magnitude_ += std::abs(v);
  }
  Complex value() const { return {re_.value(), im_.value()}; }
  double magnitude() const { return magnitude_; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
  double magnitude_ = 0.0;
};

struct EmResult {
  ComplexEvalResult value;
  ComplexEvalResult derivative;
};

unsigned truncation_for(Complex s) {
  const double from_height = std::ceil(2.0 * std::abs(s.imag())) + 10.0;
  return std::max(kMinTruncation, static_cast<unsigned>(from_height));
}

// Euler-Maclaurin continuation:
//   zeta(s) = sum_{n<N} n^-s + N^{1-s}/(s-1) + N^-s/2
//           + sum_{k=1}^{m} B_{2k}/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1}
// and its term-wise derivative.
EmResult euler_maclaurin(Complex s, bool with_derivative) {
  const unsigned N = truncation_for(s);
  const double dn = static_cast<double>(N);
  const double log_n = std::log(dn);
  const auto& coeff = em_coefficients();

  ComplexAccumulator sum, dsum;
  for (unsigned n = 1; n < N; ++n) {
    const Complex term = inverse_power(n, s);
    sum.add(term);
    if (with_derivative && n > 1) dsum.add(-std::log(static_cast<double>(n)) * term);
  }

  const Complex n_s = inverse_power(dn, s);
  const Complex sm1 = s - 1.0;
  const Complex tail = dn * n_s / sm1;
  sum.add(tail);
  sum.add(0.5 * n_s);
  if (with_derivative) {
    dsum.add(-log_n * tail - tail / sm1);
    dsum.add(-0.5 * log_n * n_s);
  }

  Complex poly = s;  // s (s+1) ... (s+2k-2)
  Complex dpoly = 1.0;
  double scale = 1.0 / dn;  // N^{1-2k}
  for (unsigned k = 1; k <= kCorrectionTerms + 1; ++k) {
    const Complex base = coeff[k] * scale * n_s;
    const Complex term = base * poly;
    const Complex dterm = base * (dpoly - log_n * poly);
    if (k <= kCorrectionTerms) {
      sum.add(term);
      if (with_derivative) dsum.add(dterm);
    } else {
      EmResult r;
      r.value.value = sum.value();
      r.value.est_error = std::abs(term) + 8 * kEps * sum.magnitude();
      r.derivative.value = dsum.value();
      r.derivative.est_error = std::abs(dterm) + 8 * kEps * dsum.magnitude() * (1 + log_n);
      return r;
    }
    for (unsigned j : {2 * k - 1, 2 * k}) {
      const Complex factor = s + static_cast<double>(j);
      dpoly = dpoly * factor + poly;
      poly *= factor;
    }
    scale /= dn * dn;
  }
  return {};
}

void check_contract(Complex s, const char* op) {
  if (s == Complex(1.0, 0.0)) throw PoleError(std::string(op) + ": pole at s = 1");
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) {
    throw DomainError(std::string(op) + ": non-finite argument");
  }
  if (std::abs(s.imag()) > kMaxImag || s.real() < kMinReal) {
    std::ostringstream msg;
    msg << op << ": s = " << s.real() << (s.imag() < 0 ? "" : "+") << s.imag()
        << "i outside the contract region";
    throw DomainError(msg.str());
  }
}

bool is_trivial_zero(Complex s) {
  return s.imag() == 0.0 && s.real() < 0 && std::fmod(s.real(), 2.0) == 0.0;
}

// chi(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s), so zeta(s) = chi(s) zeta(1-s),
// together with chi'(s).
struct Chi {
  Complex value;
  Complex derivative;
};

Chi reflection_factor(Complex s) {
  const Complex one_minus = 1.0 - s;
  const Complex amplitude =
      std::exp(s * std::log(2.0) + (s - 1.0) * std::log(kPi) + log_gamma(one_minus));
  const Complex sine = sin_half_pi(s);
  const Complex cosine = cos_half_pi(s);
  Chi chi;
  chi.value = amplitude * sine;
  chi.derivative =
      amplitude * ((std::log(2.0 * kPi) - digamma(one_minus)) * sine + (kPi / 2.0) * cosine);
  return chi;
}

}  // namespace

const std::vector<Rational>& bernoulli_table() {
  static const std::vector<Rational> table = build_bernoulli(kBernoulliMax);
  return table;
}

Rational bernoulli(unsigned n) {
  if (n > kBernoulliMax) {
    throw DomainError("bernoulli: n = " + std::to_string(n) + " above table size 64");
  }
  return bernoulli_table()[n];
}

ComplexEvalResult zeta(Complex s) {
  check_contract(s, "zeta");
  if (s.real() >= kReflectBelow) return euler_maclaurin(s, false).value;
  if (is_trivial_zero(s)) return {Complex(0.0, 0.0), 0.0};
  const Chi chi = reflection_factor(s);
  const ComplexEvalResult mirror = euler_maclaurin(1.0 - s, false).value;
  ComplexEvalResult r;
  r.value = chi.value * mirror.value;
  r.est_error = std::abs(chi.value) * mirror.est_error + 16 * kEps * std::abs(r.value);
  return r;
}

ComplexEvalResult zeta_prime(Complex s) {
  check_contract(s, "zeta_prime");
  if (s.real() >= kReflectBelow) return euler_maclaurin(s, true).derivative;
  const Chi chi = reflection_factor(s);
  const EmResult mirror = euler_maclaurin(1.0 - s, true);
  // d/ds [chi(s) zeta(1-s)] = chi'(s) zeta(1-s) - chi(s) zeta'(1-s)
  ComplexEvalResult r;
  r.value = chi.derivative * mirror.value.value - chi.value * mirror.derivative.value;
  r.est_error = std::abs(chi.derivative) * mirror.value.est_error +
                std::abs(chi.value) * mirror.derivative.est_error +
                16 * kEps * std::abs(r.value);
  return r;
}

Complex zeta_prime_numeric(Complex s, double h) {
  auto central = [&](double step) {
    return (zeta(s + step).value - zeta(s - step).value) / (2.0 * step);
  };
  const Complex coarse = central(h);
  const Complex fine = central(h / 2.0);
  return (4.0 * fine - coarse) / 3.0;
}

SpecialValue zeta_special(SpecialKind kind, unsigned n) {
  if (2 * n + 2 > kBernoulliMax) {
    throw DomainError("zeta_special: 2n+2 exceeds the Bernoulli table");
  }
  SpecialValue v;
  switch (kind) {
    case SpecialKind::kZetaOddNeg: {
      // zeta(-2n-1) = -B_{2n+2} / (2n+2)
      v.rational = -bernoulli(2 * n + 2) / Rational(static_cast<unsigned long>(2 * n + 2));
      v.has_rational = true;
      v.value = v.rational.get_d();
      return v;
    }
    case SpecialKind::kZetaEvenPos: {
      if (n < 1) throw DomainError("zeta_special: ZETA_EVEN_POS needs n >= 1");
      // zeta(2n) = (-1)^{n+1} (2 pi)^{2n} B_{2n} / (2 (2n)!)
      BigInt fact = 1;
      for (unsigned i = 2; i <= 2 * n; ++i) fact *= i;
      BigInt two_pow = 1;
      two_pow <<= 2 * n;
      Rational r = Rational(two_pow) * bernoulli(2 * n) / Rational(2 * fact);
      if (n % 2 == 0) r = -r;
      v.rational = r;
      v.has_rational = true;
      v.pi_power = 2 * n;
      v.value = r.get_d() * std::pow(kPi, 2.0 * n);
      return v;
    }
    case SpecialKind::kZetaPrimeEvenNeg: {
      if (n < 1) throw DomainError("zeta_special: ZETA_PRIME_EVEN_NEG needs n >= 1");
      // zeta'(-2n) = (-1)^n (2n)! zeta(2n+1) / (2 (2 pi)^{2n})
      double fact = 1.0;
      for (unsigned i = 2; i <= 2 * n; ++i) fact *= i;
      const double z = zeta(Complex(2.0 * n + 1.0, 0.0)).value.real();
      const double sign = n % 2 == 0 ? 1.0 : -1.0;
      v.value = sign * fact * z / (2.0 * std::pow(2.0 * kPi, 2.0 * n));
      return v;
    }
  }
  return v;
}

Complex log_gamma(Complex z) {
  if (!(z.real() > 0.0)) throw DomainError("log_gamma: requires Re z > 0");
  // Shift right with log Gamma(z) = log Gamma(z+K) - sum_{j<K} log(z+j); the
  // principal logs add up to the continuous branch on Re z > 0.
  Complex shift_sum = 0.0;
  Complex w = z;
  while (w.real() < kStirlingRadius) {
    shift_sum += std::log(w);
    w += 1.0;
  }
  const auto& b = bernoulli_table();
  Complex series = 0.0;
  const Complex w2 = w * w;
  Complex w_pow = w;  // w^{2k-1}
  for (unsigned k = 1; k <= kStirlingTerms; ++k) {
    const double c = b[2 * k].get_d() / (2.0 * k * (2.0 * k - 1.0));
    series += c / w_pow;
    w_pow *= w2;
  }
  return (w - 0.5) * std::log(w) - w + 0.5 * std::log(2.0 * kPi) + series - shift_sum;
}

Complex digamma(Complex z) {
  if (!(z.real() > 0.0)) throw DomainError("digamma: requires Re z > 0");
  Complex shift_sum = 0.0;
  Complex w = z;
  while (w.real() < kStirlingRadius) {
    shift_sum += 1.0 / w;
    w += 1.0;
  }
  const auto& b = bernoulli_table();
  Complex series = 0.0;
  const Complex w2 = w * w;
  Complex w_pow = w2;
  for (unsigned k = 1; k <= kStirlingTerms; ++k) {
    series += b[2 * k].get_d() / (2.0 * k) / w_pow;
    w_pow *= w2;
  }
  return std::log(w) - 0.5 / w - series - shift_sum;
}

double riemann_siegel_theta(double t) {
  if (t >= 10.0) {
    const double u = t / (2.0 * kPi);
    return t / 2.0 * std::log(u) - t / 2.0 - kPi / 8.0 + 1.0 / (48.0 * t) +
           7.0 / (5760.0 * t * t * t);
  }
  // Below t = 10 the asymptotic series is too coarse; use arg Gamma directly.
  return log_gamma(Complex(0.25, t / 2.0)).imag() - t / 2.0 * std::log(kPi);
}

double hardy_z(double t) {
  if (!(t >= kHardyMin && t <= kHardyMax)) {
    throw DomainError("hardy_z: t must lie in [2, 150]");
  }
  const Complex rotation = std::polar(1.0, riemann_siegel_theta(t));
  return (rotation * zeta(Complex(0.5, t)).value).real();
}

std::vector<ZetaZero> find_zeros(double t_max) {
  if (!(t_max >= 10.0 && t_max <= kHardyMax)) {
    throw DomainError("find_zeros: t_max must lie in [10, 150]");
  }
  std::vector<double> grid;
  for (std::size_t i = 0;; ++i) {
    const double t = kHardyMin + static_cast<double>(i) * kGridStep;
    if (t > t_max) break;
    grid.push_back(t);
  }
  if (grid.back() < t_max) grid.push_back(t_max);

  std::vector<double> values(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { values[i] = hardy_z(grid[i]); });

  struct Bracket {
    double lo, hi, z_lo;
  };
  std::vector<Bracket> brackets;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (values[i] == 0.0) {
      brackets.push_back({grid[i], grid[i], 0.0});
    } else if ((values[i] < 0) != (values[i + 1] < 0) && values[i + 1] != 0.0) {
      brackets.push_back({grid[i], grid[i + 1], values[i]});
    }
  }
  if (values.back() == 0.0) brackets.push_back({grid.back(), grid.back(), 0.0});

  std::vector<double> located(brackets.size());
  parallel_for(brackets.size(), [&](std::size_t j) {
    Bracket b = brackets[j];
    while (b.hi - b.lo > kBracketWidth) {
      const double mid = 0.5 * (b.lo + b.hi);
      const double z = hardy_z(mid);
      if (z == 0.0) {
        b.lo = b.hi = mid;
        break;
      }
      if ((z < 0) == (b.z_lo < 0)) {
        b.lo = mid;
        b.z_lo = z;
      } else {
        b.hi = mid;
      }
    }
    located[j] = 0.5 * (b.lo + b.hi);
  });

  std::vector<ZetaZero> zeros;
  zeros.reserve(located.size());
  for (std::size_t j = 0; j < located.size(); ++j) {
    zeros.push_back({static_cast<unsigned>(j + 1), located[j], Source::kLocated});
  }
  return zeros;
}

std::vector<ZetaZero> parse_zeros(std::istream& in) {
  std::vector<ZetaZero> zeros;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string_view text(line.data() + first, last - first + 1);
    if (text.front() == '#') continue;
    double t = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), t);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw FormatError("zeros file line " + std::to_string(line_no) + ": cannot parse '" +
                        std::string(text) + "'");
    }
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw ValidationError("zeros file line " + std::to_string(line_no) +
                            ": ordinate must be positive");
    }
    if (!zeros.empty() && !(t > zeros.back().t)) {
      throw ValidationError("zeros file line " + std::to_string(line_no) +
                            ": ordinates must be strictly increasing");
    }
    if (t <= kHardyMax) {
      if (t < kHardyMin || std::abs(hardy_z(t)) > 1e-3) {
        throw ValidationError("zeros file line " + std::to_string(line_no) + ": t = " +
                              std::string(text) + " is not a zero of Z(t)");
      }
    }
    zeros.push_back({static_cast<unsigned>(zeros.size() + 1), t, Source::kLoaded});
  }
  return zeros;
}

std::vector<ZetaZero> load_zeros(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open zeros file " + path.string());
  return parse_zeros(in);
}

void write_zeros(std::ostream& out, const std::vector<ZetaZero>& zeros) {
  char buf[64];
  for (const auto& z : zeros) {
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, z.t);
    out.write(buf, ptr - buf);
    out << '\n';
  }
}

double count_zeros_formula(double T) {
  if (!(T >= 2.0)) throw DomainError("count_zeros_formula: T must be >= 2");
  const double u = T / (2.0 * kPi);
  return u * std::log(u) - u + 7.0 / 8.0;
}

}  // namespace totlab::zeta
