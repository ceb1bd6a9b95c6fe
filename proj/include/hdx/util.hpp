#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hdx {

// Single error type for the whole library; messages are meant to be
// actionable (they name the face / color / file location involved).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Decimal serialization used by every file format and report. %.17g is
// enough digits for an exact double round trip and trims trailing zeros,
// so output is byte-stable.
inline std::string format_g17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Mixed relative/absolute comparison scale: |a-b| <= tol * err_scale(a,b)
// behaves absolutely near zero and relatively for large magnitudes.
inline double err_scale(double a, double b) {
  return std::max({1.0, std::fabs(a), std::fabs(b)});
}

inline bool close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * err_scale(a, b);
}

// In-place Walsh-Hadamard transform over subset-indexed coefficients:
// out[mask] = sum_S c[S] * prod_{i in S} r_i with r_i = -1 iff bit i of
// mask is set. Length must be a power of two.
inline void walsh_hadamard(std::span<double> v) {
  const size_t n = v.size();
  for (size_t len = 1; len < n; len <<= 1) {
    for (size_t base = 0; base < n; base += len << 1) {
      for (size_t k = base; k < base + len; ++k) {
        const double a = v[k], b = v[k + len];
        v[k] = a + b;
        v[k + len] = a - b;
      }
    }
  }
}

inline double weighted_q_norm(std::span<const double> w,
                              std::span<const double> v, double q) {
  double acc = 0.0;
  for (size_t i = 0; i < v.size(); ++i) acc += w[i] * std::pow(std::fabs(v[i]), q);
  return std::pow(acc, 1.0 / q);
}

}  // namespace hdx
