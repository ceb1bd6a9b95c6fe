#pragma once

// Text formats and atomic file output.
//
// Complex file: first data line "d k_1 ... k_d", then one face per line
// "v_1 ... v_d w" with 0-based vertex ids and a positive weight. '#'
// starts a comment anywhere; blank lines are skipped; face order is
// irrelevant. Weights are normalized on load and the correction is kept
// on the complex.
//
// Function file: one line "v_1 ... v_d value" per top face, covering the
// support exactly (no duplicates, no misses, no unknown faces).
//
// Both writers emit canonical form: faces in support order, numbers with
// 17 significant digits.

#include <string>

#include "hdx/complex.hpp"

namespace hdx {

ComplexPtr load_complex(const std::string& path);
void save_complex(const PartiteComplex& X, const std::string& path);

FaceFunction load_function(const std::string& path, ComplexPtr X);
void save_function(const FaceFunction& f, const std::string& path);

// Writes content to a sibling temporary file, then renames over path.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace hdx
