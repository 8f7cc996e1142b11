#include "totlab/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <new>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "totlab/arith_core.hpp"
#include "totlab/error_lab.hpp"
#include "totlab/explicit_formula.hpp"
#include "totlab/format.hpp"
#include "totlab/parallel.hpp"
#include "totlab/selftest.hpp"
#include "totlab/summatory.hpp"
#include "totlab/twisted_sums.hpp"
#include "totlab/zeta_engine.hpp"

namespace totlab::cli {
namespace {

namespace fs = std::filesystem;

struct RunConfig {
  unsigned threads = 0;
  std::string zeros_path;
  std::string checkpoint_path;
  std::string out_path;
  std::string x, lo, hi, step = "1", n;
  std::string mode;
  std::string kind;
  unsigned k = 1;
  double xf = 0.0;
  double re = 0.0, im = 0.0;
  bool derivative = false;
  double t_max = 100.0;
  std::string emit_path;
  double sigma0 = 2.5, T = 120.0, quad_step = 0.01;
  unsigned n_max = explicit_formula::kDefaultTrivialTerms;
  int zeros_count = -1;
  bool quick = false;
};

std::string version_text() {
  std::ostringstream s;
  s << "totlab " << kVersion << " (zeta contract: Re(s) >= " << zeta::kMinReal
    << ", |Im(s)| <= " << zeta::kMaxImag << ", s != 1)";
  return s.str();
}

fs::path checkpoint_file(const std::string& name) {
  fs::path p(name);
  if (p.is_absolute()) return p;
  const char* dir = std::getenv("TOTLAB_CACHE_DIR");
  return (dir && *dir) ? fs::path(dir) / p : p;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ResourceError("cannot open " + path + " for writing");
  return f;
}

std::vector<zeta::ZetaZero> zeros_for(const RunConfig& cfg) {
  return cfg.zeros_path.empty() ? zeta::default_zeros() : zeta::load_zeros(cfg.zeros_path);
}

std::uint64_t need(const std::string& text, const char* flag) {
  if (text.empty()) throw DomainError(std::string("missing ") + flag);
  return parse_u64(text);
}

// Runs a summatory query, going through the checkpoint file when asked.
i128 cached(const RunConfig& cfg, const std::function<i128(summatory::SummatoryCache&)>& body) {
  summatory::SummatoryCache cache;
  if (cfg.checkpoint_path.empty()) return body(cache);
  const fs::path file = checkpoint_file(cfg.checkpoint_path);
  if (fs::exists(file)) cache.load_jsonl(file);
  const i128 v = body(cache);
  cache.save_jsonl(file);
  return v;
}

void cmd_sieve(const RunConfig& cfg, std::ostream& out) {
  const auto t = arith::sieve_segment(need(cfg.lo, "--lo"), need(cfg.hi, "--hi"));
  i128 phi = 0, mu = 0, d = 0;
  for (std::uint64_t n = t.lo; n <= t.hi; ++n) {
    phi += t.phi_of(n);
    mu += t.mu_of(n);
    d += t.d_of(n);
  }
  if (!cfg.out_path.empty()) {
    auto f = open_out(cfg.out_path);
    f << "n,phi,mu,d\n";
    for (std::uint64_t n = t.lo; n <= t.hi; ++n) {
      f << n << ',' << t.phi_of(n) << ',' << t.mu_of(n) << ',' << t.d_of(n) << '\n';
    }
  }
  out << "count=" << t.size() << " phi_sum=" << to_string(phi) << " mu_sum=" << to_string(mu)
      << " d_sum=" << to_string(d) << '\n';
}

void cmd_phi_sum(const RunConfig& cfg, std::ostream& out) {
  const std::uint64_t x = need(cfg.x, "--x");
  if (cfg.mode == "brute") {
    out << to_string(summatory::phi_sum_brute(x)) << '\n';
  } else if (cfg.mode.empty() || cfg.mode == "fast") {
    out << to_string(cached(cfg, [&](auto& c) { return summatory::phi_sum_fast(x, c); })) << '\n';
  } else {
    throw DomainError("--mode must be fast or brute");
  }
}

void cmd_mertens(const RunConfig& cfg, std::ostream& out) {
  const std::uint64_t x = need(cfg.x, "--x");
  if (cfg.mode == "brute") {
    out << to_string(summatory::mertens_brute(x)) << '\n';
  } else if (cfg.mode.empty() || cfg.mode == "fast") {
    out << to_string(cached(cfg, [&](auto& c) { return summatory::mertens_fast(x, c); })) << '\n';
  } else {
    throw DomainError("--mode must be fast or brute");
  }
}

void cmd_phi_over_n(const RunConfig& cfg, std::ostream& out) {
  const std::uint64_t x = need(cfg.x, "--x");
  if (cfg.mode == "exact") {
    out << to_string(summatory::phi_over_n_sum_exact(x)) << '\n';
  } else if (cfg.mode == "float") {
    out << format_double(summatory::phi_over_n_sum_float(x)) << '\n';
  } else if (cfg.mode.empty()) {
    const auto v = summatory::phi_over_n_sum(x);
    out << (v.has_exact ? to_string(v.exact) : format_double(v.value)) << '\n';
  } else {
    throw DomainError("--mode must be exact or float");
  }
}

void cmd_twisted(const RunConfig& cfg, std::ostream& out) {
  const std::uint64_t x = need(cfg.x, "--x");
  const bool exact = cfg.mode.empty() || cfg.mode == "exact";
  if (!exact && cfg.mode != "float") throw DomainError("--mode must be exact or float");
  const std::string& kind = cfg.kind;
  if (kind == "frac") {
    out << (exact ? to_string(twisted::frac_part_sum(x))
                  : format_double(twisted::frac_part_sum_float(x)));
  } else if (kind == "frac-weighted") {
    if (exact) throw DomainError("frac-weighted is float only");
    out << format_double(twisted::frac_part_weighted_sum(x));
  } else if (kind == "mobius-frac") {
    out << (exact ? to_string(twisted::mobius_frac_sum(x))
                  : format_double(twisted::mobius_frac_sum_float(x)));
  } else if (kind == "mobius-weighted") {
    out << (exact ? to_string(twisted::mobius_frac_weighted_sum(x))
                  : format_double(twisted::mobius_frac_weighted_sum_float(x)));
  } else if (kind == "moment") {
    if (!exact) throw DomainError("moment is exact only");
    out << to_string(twisted::mobius_frac_moment(x, cfg.k));
  } else if (kind == "phi-frac") {
    if (!exact) throw DomainError("phi-frac is exact only");
    out << to_string(twisted::phi_frac_sum(x));
  } else {
    throw DomainError("unknown --kind " + kind);
  }
  out << '\n';
}

void cmd_decompose(const RunConfig& cfg, std::ostream& out) {
  const auto b = twisted::decompose_phi_sum(need(cfg.x, "--x"));
  out << "total=" << to_string(b.total) << " main=" << to_string(b.term_main)
      << " half=" << to_string(b.term_half) << " weighted=" << to_string(b.term_weighted)
      << " frac=" << to_string(b.term_frac) << " sq=" << to_string(b.term_sq) << '\n';
}

void cmd_zeros_find(const RunConfig& cfg, std::ostream& out) {
  const auto zeros = zeta::find_zeros(cfg.t_max);
  if (cfg.emit_path.empty()) {
    zeta::write_zeros(out, zeros);
    return;
  }
  auto f = open_out(cfg.emit_path);
  zeta::write_zeros(f, zeros);
  out << "count=" << zeros.size() << '\n';
}

void cmd_zeros_load(const RunConfig& cfg, std::ostream& out) {
  const auto zeros = zeros_for(cfg);
  out << "count=" << zeros.size();
  if (!zeros.empty()) {
    out << " first=" << format_double(zeros.front().t) << " last=" << format_double(zeros.back().t);
  }
  out << '\n';
}

void cmd_zeta_eval(const RunConfig& cfg, std::ostream& out) {
  const zeta::Complex s(cfg.re, cfg.im);
  const auto r = cfg.derivative ? zeta::zeta_prime(s) : zeta::zeta(s);
  out << format_double(r.value.real()) << ' ' << format_double(r.value.imag()) << ' '
      << format_double(r.est_error) << '\n';
}

void cmd_explicit(const RunConfig& cfg, std::ostream& out) {
  auto zeros = zeros_for(cfg);
  if (cfg.zeros_count >= 0) {
    if (static_cast<std::size_t>(cfg.zeros_count) > zeros.size()) {
      throw DomainError("--zeros-count exceeds the " + std::to_string(zeros.size()) +
                        " available zeros");
    }
    zeros.resize(static_cast<std::size_t>(cfg.zeros_count));
  }
  const auto e = explicit_formula::phi_sum_explicit(cfg.xf, zeros, cfg.n_max);
  out << format_double(e.total) << '\n';
}

void cmd_perron(const RunConfig& cfg, std::ostream& out) {
  out << format_double(explicit_formula::perron_phi(cfg.xf, cfg.sigma0, cfg.T, cfg.quad_step))
      << '\n';
}

void cmd_error_scan(const RunConfig& cfg, std::ostream& out) {
  const auto report =
      error_lab::scan_errors(need(cfg.lo, "--lo"), need(cfg.hi, "--hi"), need(cfg.step, "--step"));
  if (!cfg.out_path.empty()) {
    auto f = open_out(cfg.out_path);
    error_lab::write_csv(f, report);
  }
  out << "sign_changes=" << report.sign_changes << " samples=" << report.samples.size()
      << " sup_r_over_x=" << format_double(report.sup_r_over_x)
      << " sup_f_norm=" << format_double(report.sup_f_norm)
      << " sup_r_over_x_loglog=" << format_double(report.sup_r_over_x_loglog)
      << " prime_powers=" << report.prime_power_count
      << " mean_r_over_x_prime_power=" << format_double(report.mean_r_over_x_prime_power)
      << " mean_r_over_x_other=" << format_double(report.mean_r_over_x_other)
      << " dual_checked=" << report.dual_checked << '\n';
}

void cmd_r_point(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.n.empty()) {
    out << format_double(error_lab::r_point(parse_u64(cfg.n))) << '\n';
    return;
  }
  const auto points = error_lab::r_point_range(need(cfg.lo, "--lo or --n"), need(cfg.hi, "--hi"));
  if (!cfg.out_path.empty()) {
    auto f = open_out(cfg.out_path);
    char buf[64];
    f << "n,phi,r\n";
    for (const auto& p : points) {
      std::snprintf(buf, sizeof buf, "%.12g", p.r);
      f << p.n << ',' << p.phi << ',' << buf << '\n';
    }
  }
  double lo = points.front().r, hi = points.front().r;
  for (const auto& p : points) lo = std::min(lo, p.r), hi = std::max(hi, p.r);
  out << "count=" << points.size() << " min=" << format_double(lo) << " max=" << format_double(hi)
      << '\n';
}

void cmd_jump_stats(const RunConfig& cfg, std::ostream& out) {
  const auto j = error_lab::jump_stats(need(cfg.lo, "--lo"), need(cfg.hi, "--hi"));
  out << "count=" << j.count << " min=" << j.min << " argmin=" << j.argmin << " max=" << j.max
      << " argmax=" << j.argmax << " mean=" << format_double(j.mean) << '\n';
}

int cmd_selftest(const RunConfig& cfg, std::ostream& out) {
  const auto zeros = zeros_for(cfg);
  const auto results = selftest::run(cfg.quick, zeros);
  selftest::print(out, results);
  for (const auto& r : results) {
    if (!r.passed) return exit_code(ErrorKind::kInternal);
  }
  return 0;
}

}  // namespace

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDomain:
    case ErrorKind::kFormat:
    case ErrorKind::kValidation:
    case ErrorKind::kPole:
    case ErrorKind::kDegenerateZero:
      return 1;
    case ErrorKind::kResource:
      return 2;
    case ErrorKind::kInternal:
      return 3;
  }
  return 3;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Totient summatory function laboratory", "totlab"};
  app.set_version_flag("--version", version_text());
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--threads", cfg.threads, "worker threads (default: hardware)")
      ->check(CLI::PositiveNumber);
  app.add_option("--zeros", cfg.zeros_path, "zeros file overriding the built-in table");
  app.add_option("--checkpoint", cfg.checkpoint_path,
                 "JSONL cache file, relative to $TOTLAB_CACHE_DIR");

  std::function<int()> action;
  auto simple = [&](CLI::App* sub, void (*fn)(const RunConfig&, std::ostream&)) {
    sub->callback([&, fn] { action = [&, fn] { fn(cfg, out); return 0; }; });
  };

  auto* sieve = app.add_subcommand("sieve", "phi, mu, d over [lo, hi]");
  sieve->add_option("--lo", cfg.lo)->required();
  sieve->add_option("--hi", cfg.hi)->required();
  sieve->add_option("--out", cfg.out_path, "CSV n,phi,mu,d");
  simple(sieve, cmd_sieve);

  auto* phi_sum = app.add_subcommand("phi-sum", "Phi(x)");
  phi_sum->add_option("--x", cfg.x)->required();
  phi_sum->add_option("--mode", cfg.mode, "fast (default) or brute");
  simple(phi_sum, cmd_phi_sum);

  auto* mertens = app.add_subcommand("mertens", "M(x)");
  mertens->add_option("--x", cfg.x)->required();
  mertens->add_option("--mode", cfg.mode, "fast (default) or brute");
  simple(mertens, cmd_mertens);

  auto* divisor = app.add_subcommand("divisor-sum", "D(x)");
  divisor->add_option("--x", cfg.x)->required();
  simple(divisor, [](const RunConfig& c, std::ostream& o) {
    o << to_string(summatory::divisor_sum(need(c.x, "--x"))) << '\n';
  });

  auto* squarefree = app.add_subcommand("squarefree", "Q(x)");
  squarefree->add_option("--x", cfg.x)->required();
  simple(squarefree, [](const RunConfig& c, std::ostream& o) {
    o << to_string(summatory::squarefree_count(need(c.x, "--x"))) << '\n';
  });

  auto* over_n = app.add_subcommand("phi-over-n", "sum phi(n)/n");
  over_n->add_option("--x", cfg.x)->required();
  over_n->add_option("--mode", cfg.mode, "exact or float (default: exact up to 10^7)");
  simple(over_n, cmd_phi_over_n);

  auto* tw = app.add_subcommand("twisted", "fractional-part sums");
  tw->add_option("--x", cfg.x)->required();
  tw->add_option("--kind", cfg.kind, "frac, frac-weighted, mobius-frac, mobius-weighted, moment, phi-frac")
      ->required();
  tw->add_option("--k", cfg.k, "moment order");
  tw->add_option("--mode", cfg.mode, "exact (default) or float");
  simple(tw, cmd_twisted);

  auto* decompose = app.add_subcommand("decompose", "five-term split of Phi(x)");
  decompose->add_option("--x", cfg.x)->required();
  simple(decompose, cmd_decompose);

  auto* zf = app.add_subcommand("zeros-find", "locate zeros on the critical line");
  zf->add_option("--t-max", cfg.t_max);
  zf->add_option("--emit", cfg.emit_path, "write a zeros file");
  simple(zf, cmd_zeros_find);

  auto* zl = app.add_subcommand("zeros-load", "validate a zeros file");
  simple(zl, cmd_zeros_load);

  auto* ze = app.add_subcommand("zeta-eval", "zeta(s) or zeta'(s)");
  ze->add_option("--re", cfg.re)->required();
  ze->add_option("--im", cfg.im);
  ze->add_flag("--derivative", cfg.derivative);
  simple(ze, cmd_zeta_eval);

  auto* ex = app.add_subcommand("explicit", "truncated explicit formula for Phi(x)");
  ex->add_option("--x", cfg.xf)->required();
  ex->add_option("--zeros-count", cfg.zeros_count, "leading zeros to use (default: all)")
      ->check(CLI::NonNegativeNumber);
  ex->add_option("--n-max", cfg.n_max, "trivial-zero terms");
  simple(ex, cmd_explicit);

  auto* pe = app.add_subcommand("perron", "Perron line integral for Phi(x)");
  pe->add_option("--x", cfg.xf)->required();
  pe->add_option("--sigma0", cfg.sigma0);
  pe->add_option("--T", cfg.T);
  pe->add_option("--quad-step", cfg.quad_step);
  simple(pe, cmd_perron);

  auto* es = app.add_subcommand("error-scan", "R(x) and f(x) over [lo, hi]");
  es->add_option("--lo", cfg.lo)->required();
  es->add_option("--hi", cfg.hi)->required();
  es->add_option("--step", cfg.step);
  es->add_option("--out", cfg.out_path, "CSV report");
  simple(es, cmd_error_scan);

  auto* rp = app.add_subcommand("r-point", "r(n) at n or over [lo, hi]");
  rp->add_option("--n", cfg.n);
  rp->add_option("--lo", cfg.lo);
  rp->add_option("--hi", cfg.hi);
  rp->add_option("--out", cfg.out_path, "CSV n,phi,r");
  simple(rp, cmd_r_point);

  auto* js = app.add_subcommand("jump-stats", "phi(n+1) - phi(n) over [lo, hi]");
  js->add_option("--lo", cfg.lo)->required();
  js->add_option("--hi", cfg.hi)->required();
  simple(js, cmd_jump_stats);

  auto* st = app.add_subcommand("selftest", "invariant suites of every module");
  st->add_flag("--quick", cfg.quick);
  st->callback([&] { action = [&] { return cmd_selftest(cfg, out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  const unsigned previous = worker_count();
  if (cfg.threads > 0) set_worker_count(cfg.threads);
  int code = 0;
  try {
    code = action();
  } catch (const Error& e) {
    err << to_string(e.kind()) << ": " << e.what() << '\n';
    code = exit_code(e.kind());
  } catch (const std::bad_alloc&) {
    err << "resource error: out of memory\n";
    code = exit_code(ErrorKind::kResource);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    code = exit_code(ErrorKind::kInternal);
  }
  set_worker_count(previous);
  return code;
}

}  // namespace totlab::cli
