#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "totlab/zeta_engine.hpp"

// Desk-scale invariant suites, one per module.
namespace totlab::selftest {

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::string detail;  // first failed check, empty on success
  double seconds = 0.0;
};

// quick trims every size so the whole run stays well under a minute.
std::vector<SuiteResult> run(bool quick, std::span<const zeta::ZetaZero> zeros);

// "PASS <name> (<s>s)" or "FAIL <name>: <detail>", one line per suite.
void print(std::ostream& out, const std::vector<SuiteResult>& results);

}  // namespace totlab::selftest
