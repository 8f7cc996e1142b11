#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "totlab/errors.hpp"
#include "totlab/int128.hpp"
#include "totlab/parallel.hpp"
#include "totlab/rational.hpp"

namespace totlab {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kDomain: return "domain error";
    case ErrorKind::kFormat: return "format error";
    case ErrorKind::kValidation: return "validation error";
    case ErrorKind::kPole: return "pole error";
    case ErrorKind::kDegenerateZero: return "degenerate-zero error";
    case ErrorKind::kResource: return "resource error";
    case ErrorKind::kInternal: return "internal error";
  }
  return "error";
}

// ---- workers ---------------------------------------------------------------

namespace {
std::atomic<unsigned> g_workers{std::max(1u, std::thread::hardware_concurrency())};
}

unsigned worker_count() noexcept { return g_workers.load(std::memory_order_relaxed); }
void set_worker_count(unsigned n) noexcept {
  g_workers.store(std::max(1u, n), std::memory_order_relaxed);
}

// ---- 128-bit integers ------------------------------------------------------

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string to_string(i128 v) {
  if (v >= 0) return to_string(static_cast<u128>(v));
  // Negate in unsigned space so INT128_MIN is handled.
  return "-" + to_string(static_cast<u128>(0) - static_cast<u128>(v));
}

i128 parse_i128(std::string_view text) {
  if (text.empty()) throw DomainError("empty integer literal");
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    pos = 1;
  }
  if (pos == text.size()) throw DomainError("malformed integer literal '" + std::string(text) + "'");
  constexpr u128 kLimit = static_cast<u128>(1) << 127;
  u128 mag = 0;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c < '0' || c > '9') {
      throw DomainError("malformed integer literal '" + std::string(text) + "'");
    }
    if (mag > (kLimit - static_cast<u128>(c - '0')) / 10) {
      throw DomainError("integer literal out of range '" + std::string(text) + "'");
    }
    mag = mag * 10 + static_cast<u128>(c - '0');
  }
  if (!negative && mag == kLimit) {
    throw DomainError("integer literal out of range '" + std::string(text) + "'");
  }
  return negative ? static_cast<i128>(static_cast<u128>(0) - mag) : static_cast<i128>(mag);
}

std::uint64_t parse_u64(std::string_view text) {
  const i128 v = parse_i128(text);
  if (v < 0 || v > static_cast<i128>(UINT64_MAX)) {
    throw DomainError("expected a non-negative 64-bit integer, got '" + std::string(text) + "'");
  }
  return static_cast<std::uint64_t>(v);
}

double to_double(i128 v) {
  // hi carries the top bits exactly; lo is the exact remainder (< 2^64).
  const i128 base = static_cast<i128>(1) << 64;
  const i128 hi_part = v / base;
  const i128 lo_part = v - hi_part * base;
  return std::ldexp(static_cast<double>(static_cast<std::int64_t>(hi_part)), 64) +
         static_cast<double>(lo_part);
}

// ---- GMP bridging ----------------------------------------------------------

BigInt to_big(u128 v) {
  BigInt hi(static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64)));
  BigInt lo(static_cast<unsigned long>(static_cast<std::uint64_t>(v)));
  return (hi << 64) + lo;
}

BigInt to_big(i128 v) {
  if (v >= 0) return to_big(static_cast<u128>(v));
  return -to_big(static_cast<u128>(0) - static_cast<u128>(v));
}

i128 to_i128(const BigInt& v) {
  if (mpz_sizeinbase(v.get_mpz_t(), 2) > 126) {
    throw InternalError("value exceeds the 128-bit accumulator range");
  }
  const bool negative = sgn(v) < 0;
  BigInt mag = abs(v);
  const BigInt lo_mask = (BigInt(1) << 64) - 1;
  BigInt lo = mag & lo_mask;
  BigInt hi = mag >> 64;
  const u128 m = (static_cast<u128>(hi.get_ui()) << 64) | static_cast<u128>(lo.get_ui());
  return negative ? -static_cast<i128>(m) : static_cast<i128>(m);
}

std::string to_string(const BigInt& v) { return v.get_str(); }

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace detail {

void merge_into(PartialSum& acc, const PartialSum& rhs) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), acc.den.get_mpz_t(), rhs.den.get_mpz_t());
  if (g == 1) {
    acc.num = acc.num * rhs.den + rhs.num * acc.den;
    acc.den *= rhs.den;
    return;
  }
  BigInt left_scale, right_scale;
  mpz_divexact(right_scale.get_mpz_t(), rhs.den.get_mpz_t(), g.get_mpz_t());
  mpz_divexact(left_scale.get_mpz_t(), acc.den.get_mpz_t(), g.get_mpz_t());
  acc.num = acc.num * right_scale + rhs.num * left_scale;
  acc.den *= right_scale;
}

void add_small(PartialSum& acc, const SmallFraction& f) {
  if (f.num == 0) return;
  PartialSum leaf;
  leaf.num = to_big(f.num);
  leaf.den = to_big(f.den);
  merge_into(acc, leaf);
}

}  // namespace detail
}  // namespace totlab
