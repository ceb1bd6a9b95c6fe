#pragma once

// Brute-force oracles for the test suite. Everything here is computed with
// plain loops and ordered maps, independent of the marginal-table and
// operator machinery under test.

#include <map>
#include <vector>

#include "hdx/complex.hpp"
#include "hdx/rng.hpp"

namespace testsup {

using hdx::ColorSet;
using hdx::ComplexPtr;
using hdx::FaceFunction;

using Key = std::vector<int32_t>;

inline Key project(std::span<const int32_t> face, const std::vector<int>& cols) {
  Key k;
  k.reserve(cols.size());
  for (int c : cols) k.push_back(face[c]);
  return k;
}

// Marginal distribution of the coordinates `cols`, by direct summation.
inline std::map<Key, double> raw_marginal(const hdx::PartiteComplex& X,
                                          const std::vector<int>& cols) {
  std::map<Key, double> out;
  for (int i = 0; i < X.face_count(); ++i)
    out[project(X.face(i), cols)] += X.face_weight(i);
  return out;
}

// E[f(x) | x_cols = key] for f given by top-face values, direct summation.
inline double raw_conditional_mean(const hdx::PartiteComplex& X,
                                   const std::vector<double>& top_values,
                                   const std::vector<int>& cols, const Key& key) {
  double num = 0.0, den = 0.0;
  for (int i = 0; i < X.face_count(); ++i) {
    if (project(X.face(i), cols) != key) continue;
    num += X.face_weight(i) * top_values[i];
    den += X.face_weight(i);
  }
  return num / den;
}

inline double raw_mean(const hdx::PartiteComplex& X,
                       const std::vector<double>& top_values) {
  double acc = 0.0;
  for (int i = 0; i < X.face_count(); ++i)
    acc += X.face_weight(i) * top_values[i];
  return acc;
}

inline double raw_q_norm(const hdx::PartiteComplex& X,
                         const std::vector<double>& top_values, double q) {
  double acc = 0.0;
  for (int i = 0; i < X.face_count(); ++i)
    acc += X.face_weight(i) * std::pow(std::fabs(top_values[i]), q);
  return std::pow(acc, 1.0 / q);
}

// Random sparse complex for property tests: distinct random faces with
// weights bounded away from zero.
inline ComplexPtr random_sparse_complex(int d, const std::vector<int>& sizes,
                                        int target_faces, uint64_t seed) {
  hdx::Rng rng(seed);
  std::map<Key, double> faces;
  int tries = 0;
  while (static_cast<int>(faces.size()) < target_faces && tries < 50 * target_faces) {
    Key f(d);
    for (int c = 0; c < d; ++c) f[c] = rng.uniform_int(0, sizes[c] - 1);
    faces.emplace(std::move(f), rng.uniform(0.2, 1.0));
    ++tries;
  }
  std::vector<std::pair<std::vector<int32_t>, double>> spec;
  spec.reserve(faces.size());
  for (auto& [k, w] : faces) spec.emplace_back(k, w);
  return hdx::build_explicit(spec, &sizes);
}

inline ComplexPtr random_product_complex(int d, const std::vector<int>& sizes,
                                         uint64_t seed) {
  hdx::Rng rng(seed);
  std::vector<std::vector<double>> marginals(d);
  for (int c = 0; c < d; ++c) {
    marginals[c].resize(sizes[c]);
    double tot = 0.0;
    for (double& p : marginals[c]) {
      p = rng.uniform(0.1, 1.0);
      tot += p;
    }
    for (double& p : marginals[c]) p /= tot;
  }
  return hdx::build_product(marginals);
}

inline FaceFunction random_gauss_function(const ComplexPtr& X, uint64_t seed) {
  hdx::Rng rng(seed);
  std::vector<double> v(X->face_count());
  for (double& x : v) x = rng.normal();
  return FaceFunction::on(X, ColorSet::all(X->dimension()), std::move(v));
}

inline ComplexPtr uniform_cube(int d) {
  return hdx::build_product(std::vector<std::vector<double>>(d, {0.5, 0.5}));
}

// Vertex id 0 -> -1, id 1 -> +1.
inline double pm(int32_t v) { return v == 0 ? -1.0 : 1.0; }

}  // namespace testsup
