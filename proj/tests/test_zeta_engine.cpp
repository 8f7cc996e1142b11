#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "totlab/errors.hpp"
#include "totlab/numeric.hpp"
#include "totlab/parallel.hpp"
#include "totlab/zeta_engine.hpp"

using namespace totlab;
using totlab::zeta::Complex;
namespace z = totlab::zeta;

namespace {

// Akiyama-Tanigawa; yields B_1 = +1/2.
std::vector<Rational> akiyama_tanigawa(unsigned n_max) {
  std::vector<Rational> a(n_max + 1), b(n_max + 1);
  for (unsigned m = 0; m <= n_max; ++m) {
    a[m] = Rational(1, m + 1);
    for (unsigned j = m; j >= 1; --j) a[j - 1] = j * (a[j - 1] - a[j]);
    b[m] = a[0];
  }
  return b;
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

std::vector<z::ZetaZero> parse(const std::string& text) {
  std::istringstream in(text);
  return z::parse_zeros(in);
}

}  // namespace

TEST_CASE("Bernoulli numbers") {
  CHECK(z::bernoulli(0) == 1);
  CHECK(z::bernoulli(1) == Rational(-1, 2));
  CHECK(z::bernoulli(2) == Rational(1, 6));
  CHECK(z::bernoulli(4) == Rational(-1, 30));
  CHECK(z::bernoulli(12) == Rational(-691, 2730));
  CHECK_THROWS_AS(z::bernoulli(65), DomainError);
  const auto oracle = akiyama_tanigawa(z::kBernoulliMax);
  for (unsigned n = 0; n <= z::kBernoulliMax; ++n) {
    if (n == 1) continue;
    REQUIRE(z::bernoulli(n) == oracle[n]);
    if (n >= 3 && n % 2 == 1) REQUIRE(z::bernoulli(n) == 0);
  }
  // sum_{j=0}^{m} C(m+1, j) B_j = 0
  for (unsigned m = 1; m <= z::kBernoulliMax; ++m) {
    Rational s = 0;
    BigInt c = 1;
    for (unsigned j = 0; j <= m; ++j) {
      s += Rational(c) * z::bernoulli(j);
      c = c * (m + 1 - j) / (j + 1);
    }
    REQUIRE(s == 0);
  }
}

TEST_CASE("special values") {
  CHECK(std::abs(z::zeta({2, 0}).value.real() - kPi * kPi / 6) <= 1e-12);
  CHECK(std::abs(z::zeta({4, 0}).value.real() - std::pow(kPi, 4) / 90) <= 1e-12);
  CHECK(std::abs(z::zeta({-1, 0}).value.real() + 1.0 / 12) <= 1e-12);
  CHECK(std::abs(z::zeta({0, 0}).value.real() + 0.5) <= 1e-12);
  CHECK(std::abs(z::zeta({-2, 0}).value) <= 1e-15);
  CHECK(std::abs(z::zeta({-30, 0}).value) <= 1e-12);
  const double z3 = 1.2020569031595942854;
  CHECK(std::abs(z::zeta({3, 0}).value.real() - z3) <= 1e-14);
  CHECK(std::abs(z::zeta_prime({-2, 0}).value.real() + z3 / (4 * kPi * kPi)) <= 1e-10);
  CHECK(z::zeta_prime({-2, 0}).value.real() == doctest::Approx(-0.03044846).epsilon(1e-6));
  CHECK(std::abs(z::zeta_prime({0, 0}).value.real() + 0.5 * std::log(2 * kPi)) <= 1e-12);
  // -sum log n / n^2 = -0.93754825431584375370...
  CHECK(std::abs(z::zeta_prime({2, 0}).value.real() + 0.93754825431584375) <= 1e-12);
}

TEST_CASE("closed forms") {
  const auto odd = z::zeta_special(z::SpecialKind::kZetaOddNeg, 0);
  CHECK(odd.has_rational);
  CHECK(odd.rational == Rational(-1, 12));
  CHECK(z::zeta_special(z::SpecialKind::kZetaOddNeg, 1).rational == Rational(1, 120));
  const auto even = z::zeta_special(z::SpecialKind::kZetaEvenPos, 2);
  CHECK(even.rational == Rational(1, 90));
  CHECK(even.pi_power == 4);
  CHECK(even.value == doctest::Approx(std::pow(kPi, 4) / 90).epsilon(1e-15));
  const auto prime = z::zeta_special(z::SpecialKind::kZetaPrimeEvenNeg, 1);
  CHECK_FALSE(prime.has_rational);
  CHECK(prime.value == doctest::Approx(-1.2020569031595942854 / (4 * kPi * kPi)).epsilon(1e-14));
  for (unsigned n = 1; n <= 15; ++n) {
    const double reflected = z::zeta({-2.0 * n - 1, 0}).value.real();
    CHECK(reflected == doctest::Approx(z::zeta_special(z::SpecialKind::kZetaOddNeg, n).value).epsilon(1e-12));
    const double deriv = z::zeta_prime({-2.0 * n, 0}).value.real();
    CHECK(deriv == doctest::Approx(z::zeta_special(z::SpecialKind::kZetaPrimeEvenNeg, n).value).epsilon(1e-11));
    const double even_n = z::zeta({2.0 * n, 0}).value.real();
    CHECK(even_n == doctest::Approx(z::zeta_special(z::SpecialKind::kZetaEvenPos, n).value).epsilon(1e-14));
  }
  CHECK_THROWS_AS(z::zeta_special(z::SpecialKind::kZetaEvenPos, 0), DomainError);
  CHECK_THROWS_AS(z::zeta_special(z::SpecialKind::kZetaOddNeg, 32), DomainError);
}

TEST_CASE("derivative matches Richardson differences") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> re(-1.0, 3.0), im(0.0, 100.0);
  for (int i = 0; i < 20; ++i) {
    const Complex s(re(rng), im(rng));
    if (std::abs(s - 1.0) < 0.2) continue;
    CHECK(rel(z::zeta_prime(s).value, z::zeta_prime_numeric(s)) <= 1e-8);
  }
}

TEST_CASE("conjugate symmetry and error estimates") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> re(-40.0, 10.0), im(-150.0, 150.0);
  for (int i = 0; i < 20; ++i) {
    const Complex s(re(rng), im(rng));
    const auto a = z::zeta(s);
    const auto b = z::zeta(std::conj(s));
    CHECK(rel(b.value, std::conj(a.value)) <= 1e-12);
    CHECK(a.est_error >= 0.0);
    CHECK(std::isfinite(a.est_error));
  }
}

TEST_CASE("agreement with high-precision values off the real axis") {
  // mpmath at 30 digits.
  const Complex a = z::zeta({0.5, 14.134725141734693}).value;
  CHECK(std::abs(a) < 1e-9);
  const Complex b = z::zeta({2.0, 100.0}).value;
  CHECK(rel(b, Complex(1.190780408775217, -0.05389095935426046)) < 1e-10);
}

TEST_CASE("contract region") {
  CHECK_THROWS_AS(z::zeta({1, 0}), PoleError);
  CHECK_THROWS_AS(z::zeta_prime({1, 0}), PoleError);
  CHECK_THROWS_AS(z::zeta({0.5, 151}), DomainError);
  CHECK_THROWS_AS(z::zeta({-46, 0}), DomainError);
  CHECK_NOTHROW(z::zeta({1, 1e-3}));
}

TEST_CASE("Hardy Z") {
  CHECK(std::abs(z::hardy_z(14.134725)) <= 1e-4);
  for (double t : {2.0, 5.5, 9.9, 10.1, 33.3, 149.0}) {
    CHECK(std::abs(std::abs(z::hardy_z(t)) - std::abs(z::zeta({0.5, t}).value)) <= 1e-8);
  }
  CHECK((z::hardy_z(17) > 0) == (z::hardy_z(14.2) > 0));
  CHECK((z::hardy_z(20) > 0) != (z::hardy_z(22) > 0));
  CHECK_THROWS_AS(z::hardy_z(1.9), DomainError);
  CHECK_THROWS_AS(z::hardy_z(150.1), DomainError);
  // theta continuity across the switch between log-gamma and the series
  CHECK(std::abs(z::riemann_siegel_theta(10.0 - 1e-9) - z::riemann_siegel_theta(10.0)) < 1e-8);
}

TEST_CASE("log-gamma and digamma") {
  CHECK(z::log_gamma({5, 0}).real() == doctest::Approx(std::log(24.0)).epsilon(1e-14));
  CHECK(z::log_gamma({0.5, 0}).real() == doctest::Approx(0.5 * std::log(kPi)).epsilon(1e-14));
  CHECK(z::digamma({1, 0}).real() == doctest::Approx(-kEulerGamma).epsilon(1e-14));
  const Complex s(0.25, 7.0);
  const Complex h = 1e-5;
  const Complex fd = (z::log_gamma(s + h) - z::log_gamma(s - h)) / (2.0 * h);
  CHECK(rel(z::digamma(s), fd) < 1e-8);
}

TEST_CASE("zero location") {
  const auto z15 = z::find_zeros(15);
  REQUIRE(z15.size() == 1);
  CHECK(z15[0].t == doctest::Approx(14.134725).epsilon(1e-7));
  const auto z26 = z::find_zeros(26);
  REQUIRE(z26.size() == 3);
  CHECK(std::abs(z26[1].t - 21.022040) < 1e-6);
  CHECK(std::abs(z26[2].t - 25.010858) < 1e-6);
  const auto z100 = z::find_zeros(100);
  REQUIRE(z100.size() == 29);
  for (std::size_t i = 0; i < z100.size(); ++i) {
    CHECK(z100[i].index == i + 1);
    CHECK(z100[i].source == z::Source::kLocated);
    if (i) CHECK(z100[i].t > z100[i - 1].t);
    const double t = z100[i].t;
    CHECK(z::hardy_z(t - 1e-8) * z::hardy_z(t + 1e-8) <= 0);
  }
  for (double T : {30.0, 50.0, 100.0}) {
    int count = 0;
    for (const auto& zz : z100) count += zz.t <= T;
    CHECK(std::abs(count - z::count_zeros_formula(T)) <= 2);
  }
  int below50 = 0;
  for (const auto& zz : z100) below50 += zz.t <= 50;
  CHECK(std::abs(below50 - z::count_zeros_formula(50)) <= 1.5);
  CHECK_THROWS_AS(z::find_zeros(9), DomainError);
  CHECK_THROWS_AS(z::find_zeros(151), DomainError);

  const unsigned saved = worker_count();
  set_worker_count(1);
  const auto serial = z::find_zeros(100);
  set_worker_count(saved);
  for (std::size_t i = 0; i < serial.size(); ++i) CHECK(serial[i].t == z100[i].t);
}

TEST_CASE("counting formula") {
  CHECK(z::count_zeros_formula(100) == doctest::Approx(29.002).epsilon(1e-4));
  CHECK(z::count_zeros_formula(2 * kPi * std::exp(1.0)) == doctest::Approx(0.875).epsilon(1e-12));
  CHECK_THROWS_AS(z::count_zeros_formula(1.5), DomainError);
}

TEST_CASE("zeros files") {
  const auto two = parse("14.134725141734695\n21.022039638771556\n");
  REQUIRE(two.size() == 2);
  CHECK(two[0].index == 1);
  CHECK(two[1].index == 2);
  CHECK(two[0].source == z::Source::kLoaded);
  CHECK(parse("").empty());
  CHECK(parse("# header\n  14.134725141734695  \n\n# more\n").size() == 1);
  CHECK(parse("200.5\n").size() == 1);  // above the contract region: not verified
  CHECK_THROWS_AS(parse("14.13x\n"), FormatError);
  CHECK_THROWS_AS(parse("abc\n"), FormatError);
  CHECK_THROWS_AS(parse("21.022039638771556\n14.134725141734695\n"), ValidationError);
  CHECK_THROWS_AS(parse("-3\n"), ValidationError);
  CHECK_THROWS_AS(parse("15.0\n"), ValidationError);

  const auto located = z::find_zeros(40);
  std::ostringstream out;
  z::write_zeros(out, located);
  const auto back = parse(out.str());
  REQUIRE(back.size() == located.size());
  for (std::size_t i = 0; i < back.size(); ++i) CHECK(back[i].t == located[i].t);

  const auto path = std::filesystem::temp_directory_path() / "totlab_zeros_test.txt";
  std::ofstream(path) << out.str();
  CHECK(z::load_zeros(path).size() == located.size());
  std::filesystem::remove(path);
  CHECK_THROWS_AS(z::load_zeros(path), FormatError);
}

TEST_CASE("built-in zeros table") {
  const auto zeros = z::default_zeros();
  REQUIRE(zeros.size() == 29);
  CHECK(zeros[0].source == z::Source::kLoaded);
  const auto fresh = z::find_zeros(100);
  for (std::size_t i = 0; i < zeros.size(); ++i) CHECK(zeros[i].t == fresh[i].t);
}
