#include "totlab/error_lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "totlab/arith_core.hpp"
#include "totlab/errors.hpp"
#include "totlab/parallel.hpp"
#include "totlab/summatory.hpp"
#include "totlab/twisted_sums.hpp"

namespace totlab::error_lab {
namespace {

constexpr std::uint64_t kMinChunk = 1u << 18;
constexpr std::uint64_t kMaxChunk = 1u << 22;
constexpr std::uint64_t kStreamBlock = 1u << 20;

DoubleDouble to_dd(i128 v) {
  const double hi = static_cast<double>(v);
  const double lo = static_cast<double>(v - static_cast<i128>(hi));
  return renorm(hi, lo);
}

DoubleDouble square(std::uint64_t x) {
  const DoubleDouble dx = to_dd(static_cast<i128>(x));
  return dx * dx;
}

double normalizer(std::uint64_t x) {
  const double lx = std::log(static_cast<double>(x));
  return std::sqrt(static_cast<double>(x)) * lx * lx;
}

i128 phi_sum_before(std::uint64_t x) {
  return x <= 1 ? 0 : summatory::phi_sum_fast(x - 1);
}

std::vector<std::int8_t> mu_up_to(std::uint64_t x) {
  return arith::sieve_segment(1, x).mu;
}

void require_scan_range(std::uint64_t lo, std::uint64_t hi, std::uint64_t step) {
  if (lo < 2) throw DomainError("scan_errors: lo must be >= 2");
  if (lo > hi) throw DomainError("scan_errors: lo must not exceed hi");
  if (step == 0) throw DomainError("scan_errors: step must be >= 1");
  if (hi > kScanLimit) throw DomainError("scan_errors: hi above 10^9");
  if ((hi - lo) / step + 1 > kMaxSamples) {
    throw ResourceError("scan_errors: more than 2*10^7 samples requested");
  }
}

ErrorSample make_sample(std::uint64_t x, i128 phi_sum, std::uint64_t phi_x) {
  ErrorSample s;
  s.x = x;
  s.phi_sum = phi_sum;
  s.r_big = r_big(x, phi_sum);
  s.r_over_x = s.r_big / static_cast<double>(x);
  s.r_over_sqrt = s.r_big / normalizer(x);
  s.f_norm = s.r_over_sqrt;
  s.sign = sign_of(s.r_big, x);
  s.prime_power = arith::is_prime_power(x, phi_x);
  return s;
}

// Indices of the samples that get the decomposition cross-check.
std::vector<std::size_t> dual_indices(const std::vector<ErrorSample>& samples) {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].x <= kDualLimit) eligible.push_back(i);
  }
  if (eligible.empty()) return eligible;
  const double work = static_cast<double>(eligible.size()) *
                      static_cast<double>(samples[eligible.back()].x);
  if (work <= kDualWorkBudget || eligible.size() <= kDualSampleBudget) return eligible;
  std::vector<std::size_t> picked;
  const std::size_t m = eligible.size();
  for (std::size_t k = 0; k < kDualSampleBudget; ++k) {
    picked.push_back(eligible[k * (m - 1) / (kDualSampleBudget - 1)]);
  }
  picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
  return picked;
}

}  // namespace

DoubleDouble r_big_dd(std::uint64_t x, i128 phi_sum) {
  return to_dd(phi_sum) - kThreeOverPiSq * square(x);
}

double r_big(std::uint64_t x, i128 phi_sum) { return r_big_dd(x, phi_sum).value(); }

double r_big(std::uint64_t x) {
  if (x == 0) throw DomainError("r_big: x must be >= 1");
  return r_big(x, summatory::phi_sum_fast(x));
}

int sign_of(double r, std::uint64_t x) {
  if (std::abs(r) <= kSignTolerance * static_cast<double>(x)) return 0;
  return r > 0 ? 1 : -1;
}

std::uint64_t count_sign_changes(std::span<const int> signs) {
  std::uint64_t changes = 0;
  for (std::size_t i = 1; i < signs.size(); ++i) {
    if (signs[i - 1] * signs[i] < 0) ++changes;
  }
  return changes;
}

DualPath f_dual_path(std::uint64_t x, i128 phi_sum, std::span<const std::int8_t> mu) {
  if (x < 2) throw DomainError("f_normalized: x must be >= 2");
  const twisted::FloatSums fs = twisted::float_sums(x, mu);
  const DoubleDouble dx = to_dd(static_cast<i128>(x));
  const DoubleDouble half(0.5);
  const DoubleDouble direct = r_big_dd(x, phi_sum);
  const DoubleDouble decomposed = half * square(x) * (fs.mu_over_d2 - kSixOverPiSq) +
                                  half * dx * fs.mu_over_d - dx * fs.mu_frac_over_d -
                                  half * fs.mu_frac + half * fs.mu_frac_sq;
  const double scale = normalizer(x);
  const double xd = static_cast<double>(x);
  const double lx = std::log(xd);

  DualPath d;
  d.x = x;
  d.direct = direct.value() / scale;
  d.decomposed = decomposed.value() / scale;
  d.four_sum = std::sqrt(xd) / (lx * lx) *
               (0.5 * fs.mu_over_d.value() - fs.mu_frac_over_d.value() -
                fs.mu_frac.value() / (2.0 * xd) + fs.mu_frac_sq.value() / (2.0 * xd));
  d.deviation = std::abs((direct - decomposed).value()) / std::max(std::abs(direct.value()), 1.0);
  return d;
}

DualPath f_dual_path(std::uint64_t x) {
  if (x < 2) throw DomainError("f_normalized: x must be >= 2");
  if (x > kDualLimit) throw ResourceError("f_normalized: decomposition route limited to 10^7");
  const auto mu = mu_up_to(x);
  return f_dual_path(x, summatory::phi_sum_fast(x), mu);
}

double f_normalized(std::uint64_t x) {
  const DualPath d = f_dual_path(x);
  if (d.deviation > kDualTolerance) {
    throw InternalError("f_normalized: routes disagree at x = " + std::to_string(x));
  }
  return d.direct;
}

std::vector<double> r_big_partial_summation(std::span<const std::uint64_t> xs) {
  if (xs.empty()) return {};
  if (!std::is_sorted(xs.begin(), xs.end()) || xs.front() == 0) {
    throw DomainError("r_big_partial_summation: points must be ascending and >= 1");
  }
  if (xs.back() > kResidualLimit) throw DomainError("r_big_partial_summation: x above 10^9");
  std::vector<double> out;
  out.reserve(xs.size());
  CompensatedSum a, b;  // A(n) and sum_{m<n} A(m)
  std::size_t k = 0;
  arith::for_each_segment(1, xs.back(), kStreamBlock, [&](const arith::ArithTable& t) {
    for (std::uint64_t n = t.lo; n <= t.hi; ++n) {
      a += DoubleDouble(static_cast<double>(t.phi_of(n))) / DoubleDouble(static_cast<double>(n));
      while (k < xs.size() && xs[k] == n) {
        const DoubleDouble dn = to_dd(static_cast<i128>(n));
        const DoubleDouble phi = dn * a.exact() - b.exact();
        out.push_back((phi - kThreeOverPiSq * square(n)).value());
        ++k;
      }
      b += a.exact();
    }
  });
  return out;
}

double r_point(std::uint64_t n) {
  if (n < 2) throw DomainError("r_point: n must be >= 2");
  const std::uint64_t phi = arith::phi_point(n);
  const DoubleDouble shifted = to_dd(static_cast<i128>(n)) - DoubleDouble(0.5);
  return (to_dd(static_cast<i128>(phi)) - kSixOverPiSq * shifted).value();
}

std::vector<PointError> r_point_range(std::uint64_t lo, std::uint64_t hi) {
  if (lo < 2 || lo > hi) throw DomainError("r_point_range: need 2 <= lo <= hi");
  if (hi - lo >= kMaxSamples) throw ResourceError("r_point_range: range too long");
  std::vector<PointError> out(hi - lo + 1);
  parallel_for(out.size(), [&](std::size_t i) {
    const std::uint64_t n = lo + i;
    out[i].n = n;
    out[i].phi = arith::phi_point(n);
    out[i].r = r_point(n);
  });
  return out;
}

ScanReport scan_errors(std::uint64_t lo, std::uint64_t hi, std::uint64_t step) {
  require_scan_range(lo, hi, step);
  ScanReport report;
  report.lo = lo;
  report.hi = hi;
  report.step = step;

  // Contiguous chunks, each seeded with the exact Phi at its left edge.
  const std::uint64_t span = hi - lo + 1;
  const std::uint64_t chunk = std::clamp<std::uint64_t>((span + 255) / 256, kMinChunk, kMaxChunk);
  const std::size_t chunks = (span + chunk - 1) / chunk;
  std::vector<std::vector<ErrorSample>> parts(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    const std::uint64_t a = lo + c * chunk;
    const std::uint64_t b = std::min(hi, a + chunk - 1);
    const arith::ArithTable t = arith::sieve_segment(a, b);
    i128 running = phi_sum_before(a);
    auto& out = parts[c];
    for (std::uint64_t n = a; n <= b; ++n) {
      running += t.phi_of(n);
      if ((n - lo) % step == 0) out.push_back(make_sample(n, running, t.phi_of(n)));
    }
  });
  for (auto& part : parts) {
    report.samples.insert(report.samples.end(), part.begin(), part.end());
  }

  const auto picked = dual_indices(report.samples);
  if (!picked.empty()) {
    const auto mu = mu_up_to(report.samples[picked.back()].x);
    std::vector<DualPath> checks(picked.size());
    parallel_for(picked.size(), [&](std::size_t i) {
      const ErrorSample& s = report.samples[picked[i]];
      checks[i] = f_dual_path(s.x, s.phi_sum, mu);
    });
    for (std::size_t i = 0; i < picked.size(); ++i) {
      if (checks[i].deviation > kDualTolerance) {
        throw InternalError("scan_errors: f(x) routes disagree at x = " +
                            std::to_string(checks[i].x));
      }
      ErrorSample& s = report.samples[picked[i]];
      s.f_norm = checks[i].decomposed;
      s.dual_checked = true;
      report.max_dual_deviation = std::max(report.max_dual_deviation, checks[i].deviation);
    }
    report.dual_checked = picked.size();
  }

  std::vector<int> signs;
  signs.reserve(report.samples.size());
  double sum_pp = 0.0, sum_other = 0.0;
  for (const auto& s : report.samples) {
    signs.push_back(s.sign);
    const double ratio = std::abs(s.r_over_x);
    report.sup_r_over_x = std::max(report.sup_r_over_x, ratio);
    report.sup_f_norm = std::max(report.sup_f_norm, std::abs(s.f_norm));
    if (s.x >= 16) {
      const double ll = std::sqrt(std::log(std::log(static_cast<double>(s.x))));
      report.sup_r_over_x_loglog = std::max(report.sup_r_over_x_loglog, ratio / ll);
    }
    if (s.prime_power) {
      ++report.prime_power_count;
      sum_pp += ratio;
      report.sup_r_over_x_prime_power = std::max(report.sup_r_over_x_prime_power, ratio);
    } else {
      sum_other += ratio;
      report.sup_r_over_x_other = std::max(report.sup_r_over_x_other, ratio);
    }
  }
  const std::uint64_t others = report.samples.size() - report.prime_power_count;
  if (report.prime_power_count > 0) {
    report.mean_r_over_x_prime_power = sum_pp / static_cast<double>(report.prime_power_count);
  }
  if (others > 0) report.mean_r_over_x_other = sum_other / static_cast<double>(others);
  report.sign_changes = count_sign_changes(signs);
  return report;
}

void write_csv(std::ostream& out, const ScanReport& report) {
  out << "x,phi_sum,r_big,r_over_x,r_over_sqrt,f_norm,sign\n";
  char buf[160];
  for (const auto& s : report.samples) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%d\n", s.r_big, s.r_over_x,
                  s.r_over_sqrt, s.f_norm, s.sign);
    out << s.x << ',' << to_string(s.phi_sum) << ',' << buf;
  }
}

double phi_over_n_residual(std::uint64_t x) {
  if (x == 0) throw DomainError("phi_over_n_residual: x must be >= 1");
  if (x > kResidualLimit) throw DomainError("phi_over_n_residual: x above 10^9");
  CompensatedSum a;
  arith::for_each_segment(1, x, kStreamBlock, [&](const arith::ArithTable& t) {
    for (std::uint64_t n = t.lo; n <= t.hi; ++n) {
      a += DoubleDouble(static_cast<double>(t.phi_of(n))) / DoubleDouble(static_cast<double>(n));
    }
  });
  return (a.exact() - kSixOverPiSq * to_dd(static_cast<i128>(x))).value();
}

ResidualSup phi_over_n_residual_sup(std::uint64_t lo, std::uint64_t hi) {
  if (lo == 0 || lo > hi) throw DomainError("phi_over_n_residual_sup: need 1 <= lo <= hi");
  if (hi > kResidualLimit) throw DomainError("phi_over_n_residual_sup: hi above 10^9");
  ResidualSup sup;
  CompensatedSum a;
  arith::for_each_segment(1, hi, kStreamBlock, [&](const arith::ArithTable& t) {
    for (std::uint64_t n = t.lo; n <= t.hi; ++n) {
      a += DoubleDouble(static_cast<double>(t.phi_of(n))) / DoubleDouble(static_cast<double>(n));
      if (n < lo) continue;
      const double r = std::abs((a.exact() - kSixOverPiSq * to_dd(static_cast<i128>(n))).value());
      if (r > sup.sup_abs) sup = {r, n};
    }
  });
  return sup;
}

JumpSummary jump_stats(std::uint64_t lo, std::uint64_t hi, bool keep_jumps) {
  if (lo == 0 || lo >= hi) throw DomainError("jump_stats: need 1 <= lo < hi");
  if (hi > kJumpLimit) throw DomainError("jump_stats: hi above 10^8");
  JumpSummary j;
  j.lo = lo;
  j.hi = hi;
  i128 running = summatory::phi_sum_fast(lo);
  std::uint64_t first_phi = 0;
  std::uint64_t prev = 0;
  i128 total = 0;
  bool first = true;
  arith::for_each_segment(lo, hi, kStreamBlock, [&](const arith::ArithTable& t) {
    for (std::uint64_t n = t.lo; n <= t.hi; ++n) {
      const std::uint64_t phi = t.phi_of(n);
      if (first) {
        first = false;
        first_phi = prev = phi;
        continue;
      }
      running += phi;
      const std::int64_t jump = static_cast<std::int64_t>(phi) - static_cast<std::int64_t>(prev);
      const std::uint64_t at = n - 1;
      if (j.count == 0 || jump > j.max) j.max = jump, j.argmax = at;
      if (j.count == 0 || jump < j.min) j.min = jump, j.argmin = at;
      total += jump;
      ++j.count;
      if (keep_jumps) j.jumps.push_back(jump);
      prev = phi;
    }
  });
  j.mean = static_cast<double>(total) / static_cast<double>(j.count);
  // Telescoping, and the streamed partial sums against the sublinear route.
  if (total != static_cast<i128>(prev) - static_cast<i128>(first_phi)) {
    throw InternalError("jump_stats: jumps do not telescope");
  }
  if (running != summatory::phi_sum_fast(hi)) {
    throw InternalError("jump_stats: streamed Phi differs from the sublinear value");
  }
  return j;
}

}  // namespace totlab::error_lab
