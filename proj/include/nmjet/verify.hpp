#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nmjet/estimates.hpp"
#include "nmjet/exec.hpp"
#include "nmjet/io.hpp"

namespace nmjet {

/// One asserted property: passes when the measured value satisfies its bound.
struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Outcome of a named property suite. Fitted constants are kept alongside
/// the checks so they land in the verify report.
struct SuiteResult {
  std::string name;
  std::vector<Check> checks;
  std::vector<FitResult> fits;
  json extra = json::object();
  double seconds = 0.0;

  bool passed() const;
  std::size_t failures() const;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  Exec exec = Exec::serial;
  int degcap = 6;
  int trials = 200;
};

/// algebra, jetspace, poisson, ce, group, estimates, contraction.
const std::vector<std::string>& suite_names();

/// Runs one suite; BadInput for an unknown name. Checks never throw: an
/// exception inside a check is recorded as its failure.
SuiteResult run_suite(const std::string& name, const VerifyOptions& opts);

/// A single suite, or every suite for "all".
std::vector<SuiteResult> run_suites(const std::string& name, const VerifyOptions& opts);

json suite_to_json(const SuiteResult& s);

/// so(3) with [e_i, e_j] = eps_ijk e_k, before orthonormalization (K = -2 Id).
LieAlgebra raw_so3();

}  // namespace nmjet
