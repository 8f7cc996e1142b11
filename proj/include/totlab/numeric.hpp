#pragma once

#include <cmath>

namespace totlab {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kEulerGamma = 0.5772156649015329;

// Error-free transformations.
inline double two_sum(double a, double b, double& err) {
  const double s = a + b;
  const double bb = s - a;
  err = (a - (s - bb)) + (b - bb);
  return s;
}

inline double two_prod(double a, double b, double& err) {
  const double p = a * b;
  err = std::fma(a, b, -p);
  return p;
}

// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2. Enough precision for the
// few places where a float result must survive cancellation against an
// exact integer (R(x) = Phi(x) - 3x^2/pi^2 near zero crossings).
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DoubleDouble() = default;
  constexpr DoubleDouble(double h) : hi(h) {}  // NOLINT(implicit)
  constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

  double value() const { return hi + lo; }
};

inline DoubleDouble renorm(double hi, double lo) {
  double e;
  const double s = two_sum(hi, lo, e);
  return {s, e};
}

inline DoubleDouble operator+(DoubleDouble a, DoubleDouble b) {
  double e1, e2;
  const double s = two_sum(a.hi, b.hi, e1);
  const double t = two_sum(a.lo, b.lo, e2);
  e1 += t;
  DoubleDouble r = renorm(s, e1);
  r.lo += e2;
  return renorm(r.hi, r.lo);
}

inline DoubleDouble operator-(DoubleDouble a) { return {-a.hi, -a.lo}; }
inline DoubleDouble operator-(DoubleDouble a, DoubleDouble b) { return a + (-b); }

inline DoubleDouble operator*(DoubleDouble a, DoubleDouble b) {
  double e;
  const double p = two_prod(a.hi, b.hi, e);
  e += a.hi * b.lo + a.lo * b.hi;
  return renorm(p, e);
}

inline DoubleDouble operator/(DoubleDouble a, DoubleDouble b) {
  const double q1 = a.hi / b.hi;
  const DoubleDouble r = a - b * DoubleDouble(q1);
  const double q2 = r.hi / b.hi;
  const DoubleDouble r2 = r - b * DoubleDouble(q2);
  const double q3 = r2.hi / b.hi;
  return DoubleDouble(q1) + DoubleDouble(q2) + DoubleDouble(q3);
}

// 3/pi^2 and 6/pi^2 to ~32 digits.
inline constexpr DoubleDouble kThreeOverPiSq{0.3039635509270133, -1.1898869638318325e-17};
inline constexpr DoubleDouble kSixOverPiSq{0.6079271018540267, -2.379773927663665e-17};

// Cascaded compensated accumulator: the running total is kept as a
// double-double, so the result is as if summed in ~106-bit precision.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double init) : sum_(init) {}

  CompensatedSum& operator+=(double v) {
    double e;
    const double s = two_sum(sum_.hi, v, e);
    sum_ = renorm(s, sum_.lo + e);
    return *this;
  }

  CompensatedSum& operator+=(DoubleDouble v) {
    sum_ = sum_ + v;
    return *this;
  }

  CompensatedSum& operator-=(double v) { return *this += -v; }

  double value() const { return sum_.value(); }
  DoubleDouble exact() const { return sum_; }

 private:
  DoubleDouble sum_;
};

}  // namespace totlab
