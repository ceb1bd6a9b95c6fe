#pragma once

// Machine-readable verification records. Serialization is deterministic:
// fixed key order, 17-significant-digit decimals, no locale dependence.
// Runtimes are measured but left out of the canonical forms unless asked
// for, so repeated runs stay byte-identical.

#include <cstdint>
#include <string>
#include <vector>

namespace hdx {

enum class CheckStatus { Pass, Fail, Diagnostic, Error };

const char* status_name(CheckStatus s);

struct CheckRecord {
  std::string name;
  std::string ref;  // the statement being verified, as a formula
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  CheckStatus status = CheckStatus::Pass;
  std::string params;
  uint64_t seed = 0;
  std::string complex_id;
  std::string message;
  double runtime_ms = 0.0;
};

std::string json_escape(const std::string& s);

std::string report_json(const std::vector<CheckRecord>& records,
                        bool include_runtime = false);
// One line per record: name,status,slack.
std::string report_csv(const std::vector<CheckRecord>& records);

}  // namespace hdx
