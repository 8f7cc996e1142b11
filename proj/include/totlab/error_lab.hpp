#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "totlab/int128.hpp"
#include "totlab/numeric.hpp"

// Measurements of the error term R(x) = Phi(x) - 3x^2/pi^2 and of the
// pointwise r(n) = phi(n) - 6/pi^2 (n - 1/2).
namespace totlab::error_lab {

inline constexpr std::uint64_t kScanLimit = 1'000'000'000;
inline constexpr std::uint64_t kMaxSamples = 20'000'000;
inline constexpr std::uint64_t kJumpLimit = 100'000'000;
inline constexpr std::uint64_t kResidualLimit = 1'000'000'000;
inline constexpr double kSignTolerance = 1e-9;  // times x
inline constexpr double kDualTolerance = 1e-6;
// Decomposition cross-check of f(x): every sample while the total work stays
// under kDualWorkBudget, otherwise kDualSampleBudget evenly spaced samples,
// and never above kDualLimit (the route is O(x) per sample).
inline constexpr std::uint64_t kDualLimit = 10'000'000;
inline constexpr double kDualWorkBudget = 5e8;
inline constexpr std::size_t kDualSampleBudget = 200;

struct ErrorSample {
  std::uint64_t x = 0;
  i128 phi_sum = 0;
  double r_big = 0.0;
  double r_over_x = 0.0;
  double r_over_sqrt = 0.0;  // R / (sqrt(x) log^2 x)
  double f_norm = 0.0;       // decomposition value on dual-checked rows
  int sign = 0;
  bool prime_power = false;
  bool dual_checked = false;
};

struct ScanReport {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::uint64_t step = 1;
  std::vector<ErrorSample> samples;
  std::uint64_t sign_changes = 0;
  double sup_r_over_x = 0.0;
  double sup_f_norm = 0.0;
  // sup |R| / (x sqrt(log log x)) over samples with x >= 16.
  double sup_r_over_x_loglog = 0.0;
  // |R|/x split by whether x is a prime power.
  std::uint64_t prime_power_count = 0;
  double sup_r_over_x_prime_power = 0.0;
  double mean_r_over_x_prime_power = 0.0;
  double sup_r_over_x_other = 0.0;
  double mean_r_over_x_other = 0.0;
  std::uint64_t dual_checked = 0;
  double max_dual_deviation = 0.0;  // |R_direct - R_decomposed| / max(|R|, 1)
};

// R(x) from an exact Phi(x), accumulated in double-double.
DoubleDouble r_big_dd(std::uint64_t x, i128 phi_sum);
double r_big(std::uint64_t x, i128 phi_sum);
double r_big(std::uint64_t x);

int sign_of(double r, std::uint64_t x);
std::uint64_t count_sign_changes(std::span<const int> signs);

// Both routes to f(x) and the literal four-sum expression, which omits
// x^2/2 (sum_{d<=x} mu(d)/d^2 - 6/pi^2) and is therefore reported only.
struct DualPath {
  std::uint64_t x = 0;
  double direct = 0.0;
  double decomposed = 0.0;
  double four_sum = 0.0;
  double deviation = 0.0;  // on R, relative to max(|R|, 1)
};

DualPath f_dual_path(std::uint64_t x, i128 phi_sum, std::span<const std::int8_t> mu);
DualPath f_dual_path(std::uint64_t x);
// Throws InternalError when the two routes disagree beyond kDualTolerance.
double f_normalized(std::uint64_t x);

// R(x) through Phi(x) = x A(x) - sum_{n<x} A(n), A(n) = sum_{m<=n} phi(m)/m,
// evaluated at every point of xs (ascending) in one streamed pass.
std::vector<double> r_big_partial_summation(std::span<const std::uint64_t> xs);

double r_point(std::uint64_t n);
struct PointError {
  std::uint64_t n = 0;
  std::uint64_t phi = 0;
  double r = 0.0;
};
std::vector<PointError> r_point_range(std::uint64_t lo, std::uint64_t hi);

ScanReport scan_errors(std::uint64_t lo, std::uint64_t hi, std::uint64_t step = 1);
void write_csv(std::ostream& out, const ScanReport& report);

double phi_over_n_residual(std::uint64_t x);
struct ResidualSup {
  double sup_abs = 0.0;
  std::uint64_t arg = 0;
};
// max over lo <= x <= hi of |phi_over_n_residual(x)|.
ResidualSup phi_over_n_residual_sup(std::uint64_t lo, std::uint64_t hi);

struct JumpSummary {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::uint64_t count = 0;  // jumps phi(n+1) - phi(n) for lo <= n < hi
  std::int64_t min = 0;
  std::int64_t max = 0;
  double mean = 0.0;
  std::uint64_t argmin = 0;
  std::uint64_t argmax = 0;
  std::vector<std::int64_t> jumps;  // filled only on request
};

JumpSummary jump_stats(std::uint64_t lo, std::uint64_t hi, bool keep_jumps = false);

}  // namespace totlab::error_lab
