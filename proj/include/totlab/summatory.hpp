#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "totlab/int128.hpp"
#include "totlab/rational.hpp"

// Exact summatory functions. Each has a brute-force route (a streamed sieve)
// and, where the identities allow it, a sublinear route over the set of
// distinct quotients floor(x/d).
namespace totlab::summatory {

inline constexpr std::uint64_t kBruteLimit = 1'000'000'000;     // 10^9
inline constexpr std::uint64_t kFastLimit = 1'000'000'000'000;  // 10^12
inline constexpr std::uint64_t kExactRationalLimit = 10'000'000;
inline constexpr std::uint64_t kSmallTableCap = 10'000'000;

enum class Kind { kPhiSum, kMertens, kDivisorSum, kSquarefreeCount };

std::string_view to_string(Kind kind);
Kind parse_kind(std::string_view text);  // FormatError on unknown names

struct SummatoryValue {
  std::uint64_t x = 0;
  Kind kind = Kind::kPhiSum;
  i128 value = 0;

  friend bool operator==(const SummatoryValue&, const SummatoryValue&) = default;
};

// Prefix tables Phi(v) and M(v) for v <= limit, shared between queries.
struct SmallTable {
  std::uint64_t limit = 0;
  std::vector<std::int64_t> phi_prefix;  // index v -> Phi(v), Phi(0) = 0
  std::vector<std::int32_t> mu_prefix;   // index v -> M(v)
};

std::shared_ptr<const SmallTable> build_small_table(std::uint64_t limit);

// Memo of finished summatory values keyed by (kind, x). Reads take a shared
// lock and writes an exclusive one, so one cache may serve several workers.
class SummatoryCache {
 public:
  SummatoryCache() = default;
  SummatoryCache(const SummatoryCache&) = delete;
  SummatoryCache& operator=(const SummatoryCache&) = delete;

  std::optional<i128> find(Kind kind, std::uint64_t x) const;
  void store(Kind kind, std::uint64_t x, i128 value);

  std::size_t size() const;
  std::uint64_t hits() const { return hits_.load(); }
  std::uint64_t misses() const { return misses_.load(); }
  std::vector<SummatoryValue> entries() const;

  // Returns a prefix table covering at least limit, reusing the held one
  // when it is large enough.
  std::shared_ptr<const SmallTable> small_table(std::uint64_t limit);

  // JSON lines, one {"kind","x","value"} record per line, integers as
  // decimal strings.
  void save_jsonl(const std::filesystem::path& path) const;
  // Merges records from path; FormatError on malformed lines.
  std::size_t load_jsonl(const std::filesystem::path& path);

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::pair<Kind, std::uint64_t>, i128> values_;
  std::shared_ptr<const SmallTable> small_;
  mutable std::atomic<std::uint64_t> hits_{0};
  mutable std::atomic<std::uint64_t> misses_{0};
};

std::string to_jsonl_record(const SummatoryValue& v);
SummatoryValue parse_jsonl_record(std::string_view line);

i128 phi_sum_brute(std::uint64_t x);
i128 phi_sum_fast(std::uint64_t x, SummatoryCache& cache);
i128 phi_sum_fast(std::uint64_t x);

i128 mertens_brute(std::uint64_t x);
i128 mertens_fast(std::uint64_t x, SummatoryCache& cache);
i128 mertens_fast(std::uint64_t x);

// Brute values of kind at every argument in xs from a single sieve pass.
std::vector<i128> brute_at(Kind kind, std::span<const std::uint64_t> xs);

i128 divisor_sum(std::uint64_t x);
i128 squarefree_count(std::uint64_t x);

struct PhiOverNSum {
  Rational exact;  // valid only when has_exact
  bool has_exact = false;
  double value = 0.0;
};

Rational phi_over_n_sum_exact(std::uint64_t x);
double phi_over_n_sum_float(std::uint64_t x);
// Exact mode up to 10^7, float above.
PhiOverNSum phi_over_n_sum(std::uint64_t x);

double mobius_power_partial(std::uint64_t x, double s);
i128 mobius_moment(std::uint64_t x, unsigned k);

}  // namespace totlab::summatory
