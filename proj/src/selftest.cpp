#include "totlab/selftest.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <ostream>
#include <sstream>

#include "totlab/arith_core.hpp"
#include "totlab/error_lab.hpp"
#include "totlab/errors.hpp"
#include "totlab/explicit_formula.hpp"
#include "totlab/numeric.hpp"
#include "totlab/summatory.hpp"
#include "totlab/twisted_sums.hpp"

namespace totlab::selftest {
namespace {

// Records the first failed check of a suite.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && detail_.empty()) detail_ = what;
  }
  bool failed() const { return !detail_.empty(); }
  const std::string& detail() const { return detail_; }

 private:
  std::string detail_;
};

bool close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

void arith_suite(Checker& c, bool quick) {
  const std::uint64_t n_max = quick ? 20'000 : 200'000;
  const auto t = arith::sieve_segment(1, n_max);
  for (std::uint64_t n = 1; n <= n_max && !c.failed(); n += quick ? 7 : 1) {
    c.expect(t.phi_of(n) == arith::phi_point(n), "sieve phi vs factorization at " + std::to_string(n));
    c.expect(t.mu_of(n) == arith::mobius_point(n), "sieve mu vs factorization at " + std::to_string(n));
    c.expect(t.d_of(n) == arith::divisor_count_point(n), "sieve d vs factorization at " + std::to_string(n));
  }
  // Multiplicativity on coprime pairs.
  for (std::uint64_t a = 2; a < 200; ++a) {
    for (std::uint64_t b = a + 1; b < 200; b += 13) {
      if (std::gcd(a, b) != 1) continue;
      c.expect(arith::phi_point(a * b) == arith::phi_point(a) * arith::phi_point(b),
               "phi not multiplicative");
      c.expect(arith::mobius_point(a * b) == arith::mobius_point(a) * arith::mobius_point(b),
               "mu not multiplicative");
    }
  }
  // A segment far from the origin against the factorization path.
  const std::uint64_t hi = 1'000'000'000'000;
  const auto far = arith::sieve_segment(hi - (quick ? 200 : 2000), hi);
  for (std::uint64_t n = far.lo; n <= far.hi; ++n) {
    c.expect(far.phi_of(n) == arith::phi_point(n), "far segment phi at " + std::to_string(n));
  }
  // Gauss: sum_{d|n} phi(d) = n.
  for (std::uint64_t n = 1; n <= 3000; ++n) {
    std::uint64_t s = 0;
    for (std::uint64_t d = 1; d <= n; ++d) {
      if (n % d == 0) s += t.phi_of(d);
    }
    c.expect(s == n, "divisor sum of phi at " + std::to_string(n));
  }
  const auto f = arith::factorize(999'999'937ULL * 1'000'000'007ULL);
  c.expect(f.factors.size() == 2, "semiprime factorization");
}

void summatory_suite(Checker& c, bool quick) {
  using namespace summatory;
  const std::uint64_t x_max = quick ? 3'000 : 20'000;
  std::vector<std::uint64_t> xs(x_max);
  std::iota(xs.begin(), xs.end(), 1);
  const auto phi = brute_at(Kind::kPhiSum, xs);
  const auto mert = brute_at(Kind::kMertens, xs);
  const auto div = brute_at(Kind::kDivisorSum, xs);
  const auto sqf = brute_at(Kind::kSquarefreeCount, xs);
  for (std::uint64_t x = 1; x <= x_max && !c.failed(); ++x) {
    const auto sx = std::to_string(x);
    c.expect(phi_sum_fast(x) == phi[x - 1], "phi_sum_fast vs brute at " + sx);
    c.expect(mertens_fast(x) == mert[x - 1], "mertens_fast vs brute at " + sx);
    c.expect(divisor_sum(x) == div[x - 1], "divisor_sum vs brute at " + sx);
    c.expect(squarefree_count(x) == sqf[x - 1], "squarefree_count vs brute at " + sx);
  }
  // Sylvester and the Moebius floor identity.
  const std::uint64_t id_max = quick ? 500 : 2000;
  const auto t = arith::sieve_segment(1, id_max);
  for (std::uint64_t x = 1; x <= id_max; ++x) {
    i128 syl = 0, mob = 0;
    for (std::uint64_t n = 1; n <= x; ++n) {
      syl += static_cast<i128>(t.phi_of(n)) * (x / n);
      mob += t.mu_of(n) * static_cast<i128>(x / n);
    }
    c.expect(syl == static_cast<i128>(x) * (x + 1) / 2, "Sylvester identity at " + std::to_string(x));
    c.expect(mob == 1, "Moebius floor identity at " + std::to_string(x));
  }
  c.expect(mobius_moment(1000, 3) == mertens_fast(1000), "odd moment vs Mertens");
  c.expect(mobius_moment(1000, 4) == squarefree_count(1000), "even moment vs squarefree count");
  SummatoryCache cache;
  phi_sum_fast(123'456, cache);
  mertens_fast(654'321, cache);
  for (const auto& v : cache.entries()) {
    c.expect(parse_jsonl_record(to_jsonl_record(v)) == v, "JSONL round trip");
  }
  c.expect(phi_over_n_sum_exact(10) == Rational(1307, 210), "phi(n)/n sum at 10");
}

void twisted_suite(Checker& c, bool quick) {
  using namespace twisted;
  const std::uint64_t x_max = quick ? 150 : 600;
  for (std::uint64_t x = 1; x <= x_max && !c.failed(); ++x) {
    const auto sx = std::to_string(x);
    c.expect(decompose_phi_sum(x).total == Rational(to_big(summatory::phi_sum_brute(x))),
             "decomposition total at " + sx);
    c.expect(frac_part_sum(x) == frac_part_sum_identity(x), "frac part identity at " + sx);
    c.expect(mobius_frac_sum(x) == mobius_frac_sum_identity(x), "Moebius frac identity at " + sx);
    c.expect(phi_frac_sum(x) == phi_frac_sum_identity(x), "phi frac identity at " + sx);
  }
  const std::uint64_t x = quick ? 5'000 : 50'000;
  c.expect(close(mobius_frac_sum(x).get_d(), mobius_frac_sum_float(x), 1e-12), "exact vs float Moebius frac");
  c.expect(close(mobius_frac_weighted_sum(x).get_d(), mobius_frac_weighted_sum_float(x), 1e-12),
           "exact vs float weighted Moebius frac");
  c.expect(close(frac_part_sum(x).get_d(), frac_part_sum_float(x), 1e-12), "exact vs float frac part");
  c.expect(mobius_frac_moment(10, 2) == Rational(22, 147), "second moment at 10");
}

void zeta_suite(Checker& c, std::span<const zeta::ZetaZero> zeros) {
  using zeta::Complex;
  c.expect(zeta::bernoulli(12) == Rational(-691, 2730), "B_12");
  c.expect(std::abs(zeta::zeta({2, 0}).value.real() - kPi * kPi / 6) <= 1e-12, "zeta(2)");
  c.expect(std::abs(zeta::zeta({-1, 0}).value.real() + 1.0 / 12) <= 1e-12, "zeta(-1)");
  c.expect(std::abs(zeta::zeta({0, 0}).value.real() + 0.5) <= 1e-12, "zeta(0)");
  const double z3 = zeta::zeta({3, 0}).value.real();
  c.expect(std::abs(zeta::zeta_prime({-2, 0}).value.real() + z3 / (4 * kPi * kPi)) <= 1e-10,
           "zeta'(-2)");
  for (int i = 0; i < 20; ++i) {
    const Complex s(-1.0 + 4.0 * ((i * 7) % 20) / 19.0, 5.0 * i + 0.37);
    if (std::abs(s - 1.0) < 0.1) continue;
    const Complex a = zeta::zeta_prime(s).value;
    const Complex b = zeta::zeta_prime_numeric(s);
    c.expect(std::abs(a - b) <= 1e-8 * std::abs(a), "zeta' vs finite difference");
  }
  for (double t = 2.0; t <= 150.0; t += 7.3) {
    const double z = zeta::hardy_z(t);
    c.expect(std::abs(std::abs(z) - std::abs(zeta::zeta({0.5, t}).value)) <= 1e-8, "|Z(t)| vs |zeta|");
  }
  for (const auto& z : zeros) {
    if (z.t > zeta::kHardyMax) continue;
    c.expect(std::abs(zeta::zeta({0.5, z.t}).value) <= 1e-6, "zeta at a loaded zero");
  }
  // Closed forms against the reflected evaluation.
  for (unsigned n = 1; n <= 15; ++n) {
    const double odd = zeta::zeta({-2.0 * n - 1.0, 0}).value.real();
    c.expect(close(odd, zeta::zeta_special(zeta::SpecialKind::kZetaOddNeg, n).value, 1e-12),
             "zeta(-2n-1) closed form");
  }
}

void explicit_suite(Checker& c, std::span<const zeta::ZetaZero> zeros) {
  using namespace explicit_formula;
  const double x = 10.5;
  const auto empty = phi_sum_explicit(x, {}, 0);
  c.expect(empty.total == 3.0 * x * x / (kPi * kPi) + 1.0 / 6.0, "empty-zero degeneracy");
  for (unsigned n = 1; n <= 15; ++n) {
    const double closed = trivial_zero_term(10.0, n);
    const double numeric = std::pow(10.0, -2.0 * n) *
                           zeta::zeta({-2.0 * n - 1.0, 0}).value.real() /
                           (2.0 * n * zeta::zeta_prime({-2.0 * n, 0}).value.real());
    c.expect(close(closed, numeric, 1e-10), "trivial term " + std::to_string(n));
  }
  if (!zeros.empty()) {
    const auto paired = zero_sum_paired(100.5, zeros);
    c.expect(std::abs(paired.imag()) <= 1e-9 * std::max(1.0, std::abs(paired.real())),
             "conjugate pairing leaves an imaginary part");
    c.expect(close(paired.real(), zero_sum(100.5, zeros), 1e-9), "paired vs folded zero sum");
    const auto e = phi_sum_explicit(100.5, zeros, 20);
    c.expect(std::abs(e.total - 3044.0) <= 100.5, "explicit residual at 100.5");
  }
}

void error_suite(Checker& c, bool quick) {
  using namespace error_lab;
  const auto report = scan_errors(3000, 3500, 1);
  c.expect(report.samples.size() == 501, "scan sample count");
  c.expect(report.sign_changes >= 1, "no sign change on [3000, 3500]");
  c.expect(report.dual_checked == 501, "dual path coverage");
  std::vector<int> signs;
  for (const auto& s : report.samples) {
    const double scaled = 3.5 * s.f_norm;
    signs.push_back(s.sign == 0 ? 0 : (scaled > 0 ? 1 : -1));
  }
  c.expect(count_sign_changes(signs) == report.sign_changes, "sign changes under scaling");
  std::vector<std::uint64_t> xs;
  const std::uint64_t top = quick ? 100'000 : 1'000'000;
  for (std::uint64_t k = 1; k <= 20; ++k) xs.push_back(k * top / 20);
  const auto ps = r_big_partial_summation(xs);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double direct = r_big(xs[i]);
    c.expect(std::abs(ps[i] - direct) <= 1e-6 * std::max(std::abs(direct), 1.0),
             "partial summation R at " + std::to_string(xs[i]));
  }
  const auto j = jump_stats(1, 10, true);
  c.expect(j.max == 4 && j.argmax == 6, "jump maximum on [1, 10]");
  c.expect(std::abs(r_point(101) - (100 - 6 / (kPi * kPi) * 100.5)) <= 1e-9, "r(101)");
}

}  // namespace

std::vector<SuiteResult> run(bool quick, std::span<const zeta::ZetaZero> zeros) {
  const std::vector<std::pair<std::string, std::function<void(Checker&)>>> suites = {
      {"arith_core", [&](Checker& c) { arith_suite(c, quick); }},
      {"summatory", [&](Checker& c) { summatory_suite(c, quick); }},
      {"twisted_sums", [&](Checker& c) { twisted_suite(c, quick); }},
      {"zeta_engine", [&](Checker& c) { zeta_suite(c, zeros); }},
      {"explicit_formula", [&](Checker& c) { explicit_suite(c, zeros); }},
      {"error_lab", [&](Checker& c) { error_suite(c, quick); }},
  };
  std::vector<SuiteResult> results;
  for (const auto& [name, body] : suites) {
    SuiteResult r;
    r.name = name;
    const auto start = std::chrono::steady_clock::now();
    Checker c;
    try {
      body(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.passed = !c.failed();
    r.detail = c.detail();
    results.push_back(std::move(r));
  }
  return results;
}

void print(std::ostream& out, const std::vector<SuiteResult>& results) {
  char buf[32];
  for (const auto& r : results) {
    if (r.passed) {
      std::snprintf(buf, sizeof buf, "%.2f", r.seconds);
      out << "PASS " << r.name << " (" << buf << "s)\n";
    } else {
      out << "FAIL " << r.name << ": " << r.detail << '\n';
    }
  }
}

}  // namespace totlab::selftest
