#include "totlab/summatory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>

#include <json.hpp>

#include "totlab/arith_core.hpp"
#include "totlab/errors.hpp"
#include "totlab/numeric.hpp"

namespace totlab::summatory {
namespace {

constexpr std::uint64_t kStreamBlock = 1u << 20;

void require_positive(std::uint64_t x, const char* op) {
  if (x == 0) throw DomainError(std::string(op) + ": x must be >= 1");
}

void require_at_most(std::uint64_t x, std::uint64_t limit, const char* op) {
  if (x > limit) {
    throw DomainError(std::string(op) + ": x = " + std::to_string(x) + " above limit " +
                      std::to_string(limit));
  }
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::uint64_t small_limit_for(std::uint64_t x) {
  const double two_thirds = std::pow(static_cast<double>(x), 2.0 / 3.0);
  auto limit = static_cast<std::uint64_t>(std::ceil(two_thirds));
  limit = std::max<std::uint64_t>(limit, 64);
  return std::min({limit, x, kSmallTableCap});
}

// Shared driver for F(x) = closed(x) - sum_{d=2}^{x} F(floor(x/d)), which
// covers both Phi (closed = x(x+1)/2) and M (closed = 1). Values above the
// table limit are indexed by k = x / v, since every such v is floor(x/k).
template <typename Closed, typename Small>
i128 quotient_recursion(std::uint64_t x, std::uint64_t limit, Closed closed, Small small) {
  if (x <= limit) return small(x);
  const std::uint64_t top = x / (limit + 1);
  std::vector<i128> large(top + 1, 0);
  for (std::uint64_t k = top; k >= 1; --k) {
    const std::uint64_t v = x / k;
    i128 acc = closed(v);
    for (std::uint64_t d = 2; d <= v;) {
      const std::uint64_t q = v / d;
      const std::uint64_t d_end = v / q;
      const i128 f = q <= limit ? small(q) : large[k * d];
      acc = checked_sub(acc, checked_mul(static_cast<i128>(d_end - d + 1), f));
      d = d_end + 1;
    }
    large[k] = acc;
  }
  return large[1];
}

i128 triangle(std::uint64_t v) {
  const i128 a = static_cast<i128>(v);
  return checked_mul(a, a + 1) / 2;
}

// Streams phi, mu, d up to max(xs) and records the running sum at each x.
template <typename Increment>
std::vector<i128> stream_prefix(std::span<const std::uint64_t> xs, Increment inc) {
  std::vector<i128> out(xs.size(), 0);
  if (xs.empty()) return out;
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  if (xs[order.front()] == 0) throw DomainError("summatory: x must be >= 1");
  const std::uint64_t top = xs[order.back()];
  std::size_t next = 0;
  i128 running = 0;
  arith::for_each_segment(1, top, kStreamBlock, [&](const arith::ArithTable& t) {
    for (std::uint64_t n = t.lo; n <= t.hi; ++n) {
      running = checked_add(running, inc(t, n));
      while (next < order.size() && xs[order[next]] == n) out[order[next++]] = running;
    }
  });
  return out;
}

i128 increment_for(Kind kind, const arith::ArithTable& t, std::uint64_t n) {
  switch (kind) {
    case Kind::kPhiSum: return static_cast<i128>(t.phi_of(n));
    case Kind::kMertens: return t.mu_of(n);
    case Kind::kDivisorSum: return t.d_of(n);
    case Kind::kSquarefreeCount: return t.mu_of(n) != 0 ? 1 : 0;
  }
  return 0;
}

}  // namespace

std::string_view to_string(Kind kind) {
  switch (kind) {
    case Kind::kPhiSum: return "PHI_SUM";
    case Kind::kMertens: return "MERTENS";
    case Kind::kDivisorSum: return "DIVISOR_SUM";
    case Kind::kSquarefreeCount: return "SQUAREFREE_COUNT";
  }
  return "?";
}

Kind parse_kind(std::string_view text) {
  for (Kind k : {Kind::kPhiSum, Kind::kMertens, Kind::kDivisorSum, Kind::kSquarefreeCount}) {
    if (to_string(k) == text) return k;
  }
  throw FormatError("unknown summatory kind '" + std::string(text) + "'");
}

// ---- small tables ----------------------------------------------------------

std::shared_ptr<const SmallTable> build_small_table(std::uint64_t limit) {
  if (limit > kSmallTableCap) throw ResourceError("small table above cap");
  // Linear sieve: every composite is struck exactly once, by its smallest
  // prime factor, which gives phi and mu multiplicatively in one pass.
  std::vector<std::uint32_t> phi(limit + 1, 0);
  std::vector<std::int8_t> mu(limit + 1, 0);
  std::vector<std::uint32_t> primes;
  if (limit >= 1) {
    phi[1] = 1;
    mu[1] = 1;
  }
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (phi[i] == 0) {
      primes.push_back(static_cast<std::uint32_t>(i));
      phi[i] = static_cast<std::uint32_t>(i - 1);
      mu[i] = -1;
    }
    for (const std::uint64_t p : primes) {
      const std::uint64_t m = p * i;
      if (m > limit) break;
      if (i % p == 0) {
        phi[m] = static_cast<std::uint32_t>(phi[i] * p);
        mu[m] = 0;
        break;
      }
      phi[m] = static_cast<std::uint32_t>(phi[i] * (p - 1));
      mu[m] = static_cast<std::int8_t>(-mu[i]);
    }
  }
  auto table = std::make_shared<SmallTable>();
  table->limit = limit;
  table->phi_prefix.assign(limit + 1, 0);
  table->mu_prefix.assign(limit + 1, 0);
  for (std::uint64_t v = 1; v <= limit; ++v) {
    table->phi_prefix[v] = table->phi_prefix[v - 1] + phi[v];
    table->mu_prefix[v] = table->mu_prefix[v - 1] + mu[v];
  }
  return table;
}

// ---- cache -----------------------------------------------------------------

std::optional<i128> SummatoryCache::find(Kind kind, std::uint64_t x) const {
  std::shared_lock lock(mutex_);
  const auto it = values_.find({kind, x});
  if (it == values_.end()) {
    ++misses_;
    return std::nullopt;
  }
  ++hits_;
  return it->second;
}

void SummatoryCache::store(Kind kind, std::uint64_t x, i128 value) {
  std::unique_lock lock(mutex_);
  values_[{kind, x}] = value;
}

std::size_t SummatoryCache::size() const {
  std::shared_lock lock(mutex_);
  return values_.size();
}

std::vector<SummatoryValue> SummatoryCache::entries() const {
  std::shared_lock lock(mutex_);
  std::vector<SummatoryValue> out;
  out.reserve(values_.size());
  for (const auto& [key, value] : values_) out.push_back({key.second, key.first, value});
  return out;
}

std::shared_ptr<const SmallTable> SummatoryCache::small_table(std::uint64_t limit) {
  {
    std::shared_lock lock(mutex_);
    if (small_ && small_->limit >= limit) return small_;
  }
  auto fresh = build_small_table(limit);
  std::unique_lock lock(mutex_);
  if (!small_ || small_->limit < fresh->limit) small_ = fresh;
  return small_->limit >= limit ? small_ : fresh;
}

std::string to_jsonl_record(const SummatoryValue& v) {
  nlohmann::ordered_json j;
  j["kind"] = std::string(to_string(v.kind));
  j["x"] = std::to_string(v.x);
  j["value"] = totlab::to_string(v.value);
  return j.dump();
}

SummatoryValue parse_jsonl_record(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("checkpoint record is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind") || !j.contains("x") || !j.contains("value") ||
      !j["kind"].is_string() || !j["x"].is_string() || !j["value"].is_string()) {
    throw FormatError("checkpoint record needs string fields kind, x, value");
  }
  SummatoryValue v;
  v.kind = parse_kind(j["kind"].get<std::string>());
  try {
    v.x = parse_u64(j["x"].get<std::string>());
    v.value = parse_i128(j["value"].get<std::string>());
  } catch (const DomainError& e) {
    throw FormatError(std::string("checkpoint record: ") + e.what());
  }
  return v;
}

void SummatoryCache::save_jsonl(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ResourceError("cannot open checkpoint file " + path.string());
  for (const auto& v : entries()) out << to_jsonl_record(v) << '\n';
  if (!out) throw ResourceError("failed writing checkpoint file " + path.string());
}

std::size_t SummatoryCache::load_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read checkpoint file " + path.string());
  std::size_t loaded = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const SummatoryValue v = parse_jsonl_record(line);
    store(v.kind, v.x, v.value);
    ++loaded;
  }
  return loaded;
}

// ---- Phi and M -------------------------------------------------------------

i128 phi_sum_brute(std::uint64_t x) {
  require_positive(x, "phi_sum_brute");
  require_at_most(x, kBruteLimit, "phi_sum_brute");
  const std::uint64_t xs[] = {x};
  return stream_prefix(xs, [](const arith::ArithTable& t, std::uint64_t n) {
    return static_cast<i128>(t.phi_of(n));
  })[0];
}

i128 mertens_brute(std::uint64_t x) {
  require_positive(x, "mertens_brute");
  require_at_most(x, kBruteLimit, "mertens_brute");
  const std::uint64_t xs[] = {x};
  return stream_prefix(xs, [](const arith::ArithTable& t, std::uint64_t n) {
    return static_cast<i128>(t.mu_of(n));
  })[0];
}

std::vector<i128> brute_at(Kind kind, std::span<const std::uint64_t> xs) {
  for (const std::uint64_t x : xs) require_at_most(x, kBruteLimit, "brute_at");
  return stream_prefix(xs, [kind](const arith::ArithTable& t, std::uint64_t n) {
    return increment_for(kind, t, n);
  });
}

i128 phi_sum_fast(std::uint64_t x, SummatoryCache& cache) {
  require_positive(x, "phi_sum_fast");
  require_at_most(x, kFastLimit, "phi_sum_fast");
  if (auto hit = cache.find(Kind::kPhiSum, x)) return *hit;
  const auto table = cache.small_table(small_limit_for(x));
  const auto& prefix = table->phi_prefix;
  const i128 value = quotient_recursion(
      x, table->limit, triangle, [&](std::uint64_t v) { return static_cast<i128>(prefix[v]); });
  if (value < 1 || value > triangle(x)) {
    throw InternalError("phi_sum_fast: result outside [1, x(x+1)/2]");
  }
  cache.store(Kind::kPhiSum, x, value);
  return value;
}

i128 phi_sum_fast(std::uint64_t x) {
  SummatoryCache cache;
  return phi_sum_fast(x, cache);
}

i128 mertens_fast(std::uint64_t x, SummatoryCache& cache) {
  require_positive(x, "mertens_fast");
  require_at_most(x, kFastLimit, "mertens_fast");
  if (auto hit = cache.find(Kind::kMertens, x)) return *hit;
  const auto table = cache.small_table(small_limit_for(x));
  const auto& prefix = table->mu_prefix;
  const i128 value = quotient_recursion(
      x, table->limit, [](std::uint64_t) { return i128{1}; },
      [&](std::uint64_t v) { return static_cast<i128>(prefix[v]); });
  if (value > static_cast<i128>(x) || value < -static_cast<i128>(x)) {
    throw InternalError("mertens_fast: |M(x)| > x");
  }
  cache.store(Kind::kMertens, x, value);
  return value;
}

i128 mertens_fast(std::uint64_t x) {
  SummatoryCache cache;
  return mertens_fast(x, cache);
}

// ---- D and Q ---------------------------------------------------------------

i128 divisor_sum(std::uint64_t x) {
  require_positive(x, "divisor_sum");
  require_at_most(x, kFastLimit, "divisor_sum");
  // Hyperbola method: lattice points under n*m <= x counted once per side.
  const std::uint64_t s = isqrt(x);
  i128 acc = 0;
  for (std::uint64_t d = 1; d <= s;) {
    const std::uint64_t q = x / d;
    const std::uint64_t d_end = std::min(s, x / q);
    acc = checked_add(acc, static_cast<i128>(q) * static_cast<i128>(d_end - d + 1));
    d = d_end + 1;
  }
  return checked_sub(checked_mul(acc, 2), static_cast<i128>(s) * static_cast<i128>(s));
}

i128 squarefree_count(std::uint64_t x) {
  require_positive(x, "squarefree_count");
  require_at_most(x, kFastLimit, "squarefree_count");
  const std::uint64_t s = isqrt(x);
  const arith::ArithTable t = arith::sieve_segment(1, s);
  i128 acc = 0;
  for (std::uint64_t d = 1; d <= s; ++d) {
    const int m = t.mu_of(d);
    if (m != 0) acc += m * static_cast<i128>(x / (d * d));
  }
  return acc;
}

// ---- phi(n)/n, mu(n)/n^s, moments -----------------------------------------

Rational phi_over_n_sum_exact(std::uint64_t x) {
  require_positive(x, "phi_over_n_sum");
  if (x > kExactRationalLimit) {
    throw ResourceError("phi_over_n_sum: exact mode limited to x <= 10^7");
  }
  const arith::ArithTable t = arith::sieve_segment(1, x);
  return sum_fractions(1, x + 1, [&](std::uint64_t n) {
    const std::uint64_t p = t.phi_of(n);
    const std::uint64_t g = std::gcd(p, n);
    return SmallFraction{static_cast<i128>(p / g), static_cast<u128>(n / g)};
  });
}

double phi_over_n_sum_float(std::uint64_t x) {
  require_positive(x, "phi_over_n_sum");
  require_at_most(x, kBruteLimit, "phi_over_n_sum");
  CompensatedSum sum;
  arith::for_each_segment(1, x, kStreamBlock, [&](const arith::ArithTable& t) {
    for (std::uint64_t n = t.lo; n <= t.hi; ++n) {
      sum += static_cast<double>(t.phi_of(n)) / static_cast<double>(n);
    }
  });
  return sum.value();
}

PhiOverNSum phi_over_n_sum(std::uint64_t x) {
  PhiOverNSum out;
  if (x <= kExactRationalLimit) {
    out.exact = phi_over_n_sum_exact(x);
    out.has_exact = true;
    out.value = out.exact.get_d();
  } else {
    out.value = phi_over_n_sum_float(x);
  }
  return out;
}

double mobius_power_partial(std::uint64_t x, double s) {
  require_positive(x, "mobius_power_partial");
  require_at_most(x, kBruteLimit, "mobius_power_partial");
  if (!(s > 0.0)) throw DomainError("mobius_power_partial: s must be > 0");
  CompensatedSum sum;
  arith::for_each_segment(1, x, kStreamBlock, [&](const arith::ArithTable& t) {
    for (std::uint64_t n = t.lo; n <= t.hi; ++n) {
      const int m = t.mu_of(n);
      if (m != 0) sum += m * std::pow(static_cast<double>(n), -s);
    }
  });
  return sum.value();
}

i128 mobius_moment(std::uint64_t x, unsigned k) {
  require_positive(x, "mobius_moment");
  require_at_most(x, kBruteLimit, "mobius_moment");
  if (k == 0) throw DomainError("mobius_moment: k must be >= 1");
  const std::uint64_t xs[] = {x};
  return stream_prefix(xs, [k](const arith::ArithTable& t, std::uint64_t n) {
    const int m = t.mu_of(n);
    if (m >= 0) return static_cast<i128>(m);
    return static_cast<i128>(k % 2 == 1 ? -1 : 1);
  })[0];
}

}  // namespace totlab::summatory
