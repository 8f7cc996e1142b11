#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "totlab/int128.hpp"
#include "totlab/parallel.hpp"

namespace totlab {

using Rational = mpq_class;
using BigInt = mpz_class;

BigInt to_big(i128 v);
BigInt to_big(u128 v);
// Throws InternalError when v does not fit.
i128 to_i128(const BigInt& v);

std::string to_string(const Rational& q);  // "p/q", or "p" when q == 1
std::string to_string(const BigInt& v);

// One summand num/den (den > 0, not necessarily reduced).
struct SmallFraction {
  i128 num = 0;
  u128 den = 1;
};

namespace detail {

struct PartialSum {
  BigInt num{0};
  BigInt den{1};  // lcm of the leaf denominators
};

void merge_into(PartialSum& acc, const PartialSum& rhs);
void add_small(PartialSum& acc, const SmallFraction& f);

}  // namespace detail

// Exact sum of term(i) for i in [first, last). The accumulator keeps the
// denominator equal to the lcm of the leaf denominators seen so far and
// combines halves by binary splitting, which keeps operand sizes balanced.
// The index range is cut into a fixed number of chunks independent of the
// worker count; exactness makes the result schedule-independent anyway.
template <typename Term>
Rational sum_fractions(std::uint64_t first, std::uint64_t last, Term&& term) {
  if (last <= first) return Rational(0);
  constexpr std::uint64_t kLeaf = 256;
  const std::uint64_t n = last - first;
  const std::uint64_t leaves = (n + kLeaf - 1) / kLeaf;
  std::vector<detail::PartialSum> parts(leaves);
  parallel_for(leaves, [&](std::size_t b) {
    const std::uint64_t lo = first + b * kLeaf;
    const std::uint64_t hi = std::min(last, lo + kLeaf);
    detail::PartialSum acc;
    for (std::uint64_t i = lo; i < hi; ++i) detail::add_small(acc, term(i));
    parts[b] = std::move(acc);
  });
  // Pairwise tree reduction in index order.
  for (std::size_t width = 1; width < parts.size(); width *= 2) {
    const std::size_t pairs = (parts.size() + 2 * width - 1) / (2 * width);
    parallel_for(pairs, [&](std::size_t p) {
      const std::size_t left = p * 2 * width;
      const std::size_t right = left + width;
      if (right < parts.size()) {
        detail::merge_into(parts[left], parts[right]);
        parts[right] = {};
      }
    });
  }
  Rational result(parts[0].num, parts[0].den);
  result.canonicalize();
  return result;
}

}  // namespace totlab
