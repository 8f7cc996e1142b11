#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "totlab/errors.hpp"

namespace totlab {

using i128 = __int128;
using u128 = unsigned __int128;

// Overflow-checked arithmetic. Accumulators in the summatory recursions go
// through these so that a wrap is reported instead of silently returned.
inline i128 checked_add(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) throw InternalError("128-bit overflow in addition");
  return r;
}

inline i128 checked_sub(i128 a, i128 b) {
  i128 r;
  if (__builtin_sub_overflow(a, b, &r)) throw InternalError("128-bit overflow in subtraction");
  return r;
}

inline i128 checked_mul(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw InternalError("128-bit overflow in multiplication");
  return r;
}

std::string to_string(i128 v);
std::string to_string(u128 v);

// Parses an optionally signed decimal string. Throws DomainError on junk or
// out-of-range input.
i128 parse_i128(std::string_view text);
std::uint64_t parse_u64(std::string_view text);

// Nearest double to v (correctly rounded for |v| < 2^106 via a hi/lo split).
double to_double(i128 v);

}  // namespace totlab
