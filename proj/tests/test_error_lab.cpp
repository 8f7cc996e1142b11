#include <doctest.h>

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "totlab/arith_core.hpp"
#include "totlab/error_lab.hpp"
#include "totlab/errors.hpp"
#include "totlab/parallel.hpp"
#include "totlab/summatory.hpp"

using namespace totlab;
using namespace totlab::error_lab;

namespace {

// R from an mpq Phi and a 40-digit 3/pi^2.
double r_exact(std::uint64_t x) {
  static const mpf_class three_over_pi_sq("0.3039635509270133143316383896291829167131", 160);
  mpf_class phi(to_big(summatory::phi_sum_fast(x)).get_str(), 160);
  mpf_class xx(std::to_string(x), 160);
  mpf_class r = phi - three_over_pi_sq * xx * xx;
  return r.get_d();
}

}  // namespace

TEST_CASE("R(x) reference values") {
  CHECK(r_big(1) == doctest::Approx(1 - 3 / (kPi * kPi)).epsilon(1e-15));
  CHECK(r_big(1) == doctest::Approx(0.6961).epsilon(1e-4));
  CHECK(r_big(10) == doctest::Approx(32 - 300 / (kPi * kPi)).epsilon(1e-14));
  CHECK(r_big(10) == doctest::Approx(1.6037).epsilon(1e-4));
  CHECK(r_big(100) == doctest::Approx(4.365).epsilon(1e-3));
  CHECK_THROWS_AS(r_big(0), DomainError);
  for (std::uint64_t x : {2ULL, 999ULL, 123'456ULL, 99'999'989ULL, 1'000'000'000ULL}) {
    CHECK(std::abs(r_big(x) - r_exact(x)) <= 1e-12 * std::max(1.0, std::abs(r_exact(x))));
  }
}

TEST_CASE("normalized error f(x)") {
  const double r2 = 2 - 12 / (kPi * kPi);
  CHECK(f_normalized(2) == doctest::Approx(r2 / (std::sqrt(2.0) * std::pow(std::log(2.0), 2))).epsilon(1e-12));
  const DualPath d = f_dual_path(3000);
  CHECK(d.deviation <= kDualTolerance);
  CHECK(d.direct == doctest::Approx(d.decomposed).epsilon(1e-6));
  CHECK(std::isfinite(d.four_sum));
  CHECK(std::isfinite(f_normalized(1'000'000)));
  for (std::uint64_t x = 2; x <= 3000; x += 17) CHECK(f_dual_path(x).deviation <= kDualTolerance);
  CHECK_THROWS_AS(f_normalized(1), DomainError);
  CHECK_THROWS_AS(f_normalized(kDualLimit + 1), ResourceError);
}

TEST_CASE("pointwise r(n)") {
  CHECK(r_point(101) == doctest::Approx(100 - 6 / (kPi * kPi) * 100.5).epsilon(1e-14));
  CHECK(r_point(101) == doctest::Approx(38.903).epsilon(1e-4));
  CHECK(r_point(2) == doctest::Approx(0.0881).epsilon(1e-3));
  CHECK_THROWS_AS(r_point(1), DomainError);
  const std::uint64_t big = 50'000'000'000'000ULL + 1;
  CHECK(std::isfinite(r_point(big)));
  const auto range = r_point_range(big - 1, big + 9);
  REQUIRE(range.size() == 11);
  for (const auto& p : range) {
    CHECK(p.phi == arith::phi_point(p.n));
    CHECK(p.r == r_point(p.n));
  }
  CHECK_THROWS_AS(r_point_range(1, 5), DomainError);
  CHECK_THROWS_AS(r_point_range(6, 5), DomainError);
}

TEST_CASE("sign changes") {
  const std::vector<int> signs{1, 0, -1, -1, 0, 0, 1, 1, -1};
  CHECK(count_sign_changes(signs) == 1);
  const std::vector<int> empty;
  CHECK(count_sign_changes(empty) == 0);
  CHECK(sign_of(1e-7, 1000) == 0);
  CHECK(sign_of(2e-6, 1000) == 1);
  CHECK(sign_of(-2e-6, 1000) == -1);
}

TEST_CASE("scan of [3000, 3500]") {
  const ScanReport r = scan_errors(3000, 3500, 1);
  REQUIRE(r.samples.size() == 501);
  CHECK(r.sign_changes >= 1);
  CHECK(std::isfinite(r.sup_f_norm));
  CHECK(r.dual_checked == 501);
  CHECK(r.max_dual_deviation <= kDualTolerance);

  std::vector<int> signs;
  double sup_x = 0, sup_f = 0;
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    const auto& s = r.samples[i];
    CHECK(s.x == 3000 + i);
    CHECK(s.phi_sum == summatory::phi_sum_fast(s.x));
    CHECK(s.r_big == r_big(s.x));
    CHECK(s.sign == sign_of(s.r_big, s.x));
    CHECK(s.prime_power == arith::is_prime_power(s.x, arith::phi_point(s.x)));
    signs.push_back(s.sign);
    sup_x = std::max(sup_x, std::abs(s.r_over_x));
    sup_f = std::max(sup_f, std::abs(s.f_norm));
  }
  CHECK(count_sign_changes(signs) == r.sign_changes);
  for (double c : {1e-3, 1.0, 7.5, 1e6}) {
    std::vector<int> scaled;
    for (const auto& s : r.samples) scaled.push_back(s.sign == 0 ? 0 : (c * s.f_norm > 0 ? 1 : -1));
    CHECK(count_sign_changes(scaled) == r.sign_changes);
  }
  CHECK(r.sup_r_over_x == sup_x);
  CHECK(r.sup_f_norm == sup_f);
}

TEST_CASE("scan edge cases and errors") {
  const ScanReport one = scan_errors(10, 10, 1);
  CHECK(one.samples.size() == 1);
  CHECK(one.sign_changes == 0);
  const ScanReport stepped = scan_errors(2, 1000, 7);
  CHECK(stepped.samples.size() == 143);
  CHECK(stepped.samples.back().x == 996);
  CHECK_THROWS_AS(scan_errors(1, 10, 1), DomainError);
  CHECK_THROWS_AS(scan_errors(11, 10, 1), DomainError);
  CHECK_THROWS_AS(scan_errors(2, 10, 0), DomainError);
  CHECK_THROWS_AS(scan_errors(2, kScanLimit + 1, 1000), DomainError);
  CHECK_THROWS_AS(scan_errors(2, 100'000'000, 1), ResourceError);
}

TEST_CASE("scan spanning several chunks is thread-count independent") {
  const unsigned saved = worker_count();
  set_worker_count(1);
  const ScanReport a = scan_errors(2, 1'500'000, 3);
  set_worker_count(8);
  const ScanReport b = scan_errors(2, 1'500'000, 3);
  set_worker_count(saved);
  std::ostringstream ca, cb;
  write_csv(ca, a);
  write_csv(cb, b);
  CHECK(ca.str() == cb.str());
  CHECK(a.sign_changes == b.sign_changes);
  CHECK(a.samples.back().phi_sum == summatory::phi_sum_fast(a.samples.back().x));
  CHECK(a.sup_r_over_x < 1.0);
  CHECK(a.dual_checked == 200);
}

TEST_CASE("CSV layout") {
  const ScanReport r = scan_errors(2, 4, 1);
  std::ostringstream out;
  write_csv(out, r);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,phi_sum,r_big,r_over_x,r_over_sqrt,f_norm,sign");
  std::getline(in, line);
  CHECK(line.rfind("2,2,", 0) == 0);
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);
  CHECK(out.str().back() == '\n');
}

TEST_CASE("residual of sum phi(n)/n") {
  CHECK(phi_over_n_residual(1) == doctest::Approx(1 - 6 / (kPi * kPi)).epsilon(1e-14));
  CHECK(phi_over_n_residual(10) == doctest::Approx(1307.0 / 210 - 60 / (kPi * kPi)).epsilon(1e-13));
  CHECK(phi_over_n_residual(10) == doctest::Approx(0.1445).epsilon(1e-3));
  const double exact = summatory::phi_over_n_sum_exact(100'000).get_d() - 600'000 / (kPi * kPi);
  CHECK(std::abs(phi_over_n_residual(100'000) - exact) <= 1e-9);
  const auto sup = phi_over_n_residual_sup(1, 20'000);
  CHECK(sup.sup_abs == doctest::Approx(std::abs(phi_over_n_residual(sup.arg))).epsilon(1e-14));
  CHECK(sup.sup_abs <= 10);
  CHECK_THROWS_AS(phi_over_n_residual(0), DomainError);
}

TEST_CASE("local jumps") {
  const auto j = jump_stats(1, 10, true);
  CHECK(j.jumps == std::vector<std::int64_t>{0, 1, 0, 2, -2, 4, -2, 2, -2});
  CHECK(j.max == 4);
  CHECK(j.argmax == 6);
  CHECK(j.min == -2);
  CHECK(j.count == 9);
  CHECK(j.mean == doctest::Approx(3.0 / 9));
  // The largest jump up to 10^6 sits next to 990990 = 2 3^2 5 7 11^2 13,
  // whose phi is unusually small; 990991 = 443 * 2237 is not prime.
  const auto big = jump_stats(1, 1'000'000);
  const auto t = arith::sieve_segment(1, 1'000'000);
  std::int64_t best = 0;
  std::uint64_t at = 0;
  for (std::uint64_t n = 1; n < 1'000'000; ++n) {
    const auto jump = static_cast<std::int64_t>(t.phi_of(n + 1)) - static_cast<std::int64_t>(t.phi_of(n));
    if (n == 1 || jump > best) best = jump, at = n;
  }
  CHECK(big.max == best);
  CHECK(big.argmax == at);
  CHECK(big.argmax == 990'990);
  CHECK(big.max == 798'232);
  CHECK_FALSE(arith::is_prime(big.argmax + 1));
  CHECK(big.jumps.empty());
  CHECK_THROWS_AS(jump_stats(5, 5), DomainError);
  CHECK_THROWS_AS(jump_stats(1, kJumpLimit + 1), DomainError);
}

TEST_CASE("partial summation route") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::uint64_t> u(1, 1'000'000);
  std::vector<std::uint64_t> xs(20);
  for (auto& x : xs) x = u(rng);
  std::sort(xs.begin(), xs.end());
  const auto via = r_big_partial_summation(xs);
  REQUIRE(via.size() == xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double direct = r_big(xs[i]);
    CHECK(std::abs(via[i] - direct) <= 1e-6 * std::max(1.0, std::abs(direct)));
  }
  const std::vector<std::uint64_t> unsorted{5, 3};
  CHECK_THROWS_AS(r_big_partial_summation(unsorted), DomainError);
}
