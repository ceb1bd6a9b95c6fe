#pragma once

// Property-suite runner: a registry of named checks, each verifying one
// identity or inequality on internally generated seeded instances. Checks
// run in parallel; records are assembled in registry order so reports are
// deterministic for a fixed (checks, seed) pair.
//
// Status policy: exact identities and inequalities with explicit constants
// report pass/fail against the tolerance; statements whose constants are
// not pinned down report diagnostic and never fail a run. Checks whose
// name starts with "fixture/" exist to exercise the harness itself and are
// excluded from the default selection.

#include <cstdint>
#include <string>
#include <vector>

#include "hdx/report.hpp"

namespace hdx {

struct SuiteOptions {
  std::vector<std::string> checks;  // empty: every non-fixture check
  uint64_t seed = 2026;
  double tol = 1e-9;
  int jobs = 0;  // 0: HDX_JOBS env var, then hardware
  bool include_runtime = false;
  std::string out;  // optional JSON path
  std::string csv;  // optional CSV path
};

struct CheckInfo {
  std::string name;
  std::string ref;
};

std::vector<CheckInfo> registered_checks();

struct SuiteResult {
  std::vector<CheckRecord> records;
  int failed = 0;
  int errored = 0;

  bool ok() const { return failed == 0 && errored == 0; }
};

SuiteResult run_suite(const SuiteOptions& opts);

// Config file: JSON object with any of the SuiteOptions fields
// ("checks" is an array of names or the string "all").
SuiteOptions suite_options_from_json(const std::string& text);

}  // namespace hdx
