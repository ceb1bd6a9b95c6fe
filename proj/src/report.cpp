#include "hdx/report.hpp"

#include <cstdio>

#include "hdx/util.hpp"

namespace hdx {

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Diagnostic: return "diagnostic";
    case CheckStatus::Error: return "error";
  }
  return "unknown";
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out;
}

namespace {

void append_kv(std::string& out, const char* key, const std::string& value,
               bool last = false) {
  out += "\"";
  out += key;
  out += "\":\"";
  out += json_escape(value);
  out += last ? "\"" : "\",";
}

void append_kv(std::string& out, const char* key, double value,
               bool last = false) {
  out += "\"";
  out += key;
  out += "\":";
  out += format_g17(value);
  if (!last) out += ",";
}

void append_kv(std::string& out, const char* key, uint64_t value,
               bool last = false) {
  out += "\"";
  out += key;
  out += "\":";
  out += std::to_string(value);
  if (!last) out += ",";
}

}  // namespace

std::string report_json(const std::vector<CheckRecord>& records,
                        bool include_runtime) {
  std::string out = "[\n";
  for (size_t i = 0; i < records.size(); ++i) {
    const CheckRecord& r = records[i];
    out += "  {";
    append_kv(out, "name", r.name);
    append_kv(out, "ref", r.ref);
    append_kv(out, "lhs", r.lhs);
    append_kv(out, "rhs", r.rhs);
    append_kv(out, "slack", r.slack);
    append_kv(out, "status", std::string(status_name(r.status)));
    append_kv(out, "params", r.params);
    append_kv(out, "seed", r.seed);
    append_kv(out, "complex_id", r.complex_id);
    if (include_runtime) {
      append_kv(out, "message", r.message);
      append_kv(out, "runtime_ms", r.runtime_ms, /*last=*/true);
    } else {
      append_kv(out, "message", r.message, /*last=*/true);
    }
    out += "}";
    if (i + 1 < records.size()) out += ",";
    out += "\n";
  }
  out += "]\n";
  return out;
}

std::string report_csv(const std::vector<CheckRecord>& records) {
  std::string out = "name,status,slack\n";
  for (const CheckRecord& r : records) {
    out += r.name;
    out += ",";
    out += status_name(r.status);
    out += ",";
    out += format_g17(r.slack);
    out += "\n";
  }
  return out;
}

}  // namespace hdx
