#pragma once

// Weighted d-partite complexes as finitely supported distributions over
// products of ground sets, together with face functions living on marginal
// supports. This header is the substrate for everything else: walk
// operators, Efron-Stein decompositions, expansion certificates.
//
// Data model. A complex X assigns probability weight to "top faces"
// (v_0, ..., v_{d-1}) with one vertex per color; vertices are 0-based ids
// inside per-color ground sets. For a color subset S, X[S] is the marginal
// distribution of the S-coordinates and its support is enumerated in
// lexicographic order. Face functions carry the ColorSet they live on and
// are indexed by that enumeration.

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hdx/colorset.hpp"
#include "hdx/util.hpp"

namespace hdx {

class PartiteComplex;
using ComplexPtr = std::shared_ptr<const PartiteComplex>;

// A partial assignment x_S: one vertex id per color of S, listed in
// increasing color order.
struct SubAssignment {
  ColorSet colors;
  std::vector<int32_t> values;

  std::string str() const;
};

// Support of the marginal X[S]: lexicographically sorted distinct rows,
// their probabilities, and the row index of every top face's projection.
struct MarginalTable {
  ColorSet colors;
  int arity = 0;
  std::vector<int32_t> assign;     // flat, stride == arity
  std::vector<double> weight;      // marginal probabilities, sum == 1
  std::vector<int32_t> face_row;   // top face index -> row index

  int rows() const { return static_cast<int>(weight.size()); }
  std::span<const int32_t> row(int r) const {
    return {assign.data() + static_cast<size_t>(r) * arity,
            static_cast<size_t>(arity)};
  }
  // Binary search; returns -1 when the key is outside the support.
  int find(std::span<const int32_t> key) const;
};

class PartiteComplex : public std::enable_shared_from_this<PartiteComplex> {
 public:
  int dimension() const { return d_; }
  const std::vector<int>& color_sizes() const { return color_sizes_; }
  int face_count() const { return static_cast<int>(weights_.size()); }
  std::span<const int32_t> face(int i) const {
    return {verts_.data() + static_cast<size_t>(i) * d_,
            static_cast<size_t>(d_)};
  }
  double face_weight(int i) const { return weights_[i]; }
  const std::vector<double>& face_weights() const { return weights_; }

  // Content hash identifier; equal face data implies equal id, so functions
  // built on independently constructed but identical complexes compose.
  const std::string& id() const { return id_; }

  // Sum of the raw input weights before normalization, and whether it
  // deviated from 1 by more than 1e-6.
  double normalization_correction() const { return correction_; }
  bool was_renormalized() const { return renormalized_; }

  // Cached, thread-safe. The reference stays valid for the lifetime of the
  // complex.
  const MarginalTable& marginal_table(ColorSet S) const;

  // Row index of a full assignment in the top-face table, -1 if absent.
  int find_face(std::span<const int32_t> assignment) const;

  bool contains(const SubAssignment& xs) const;

  // Per-row index map from X[A]'s support onto X[S]'s support, S subset A.
  // Cached for small d where the 3^d pair family stays cheap.
  std::shared_ptr<const std::vector<int32_t>> projection_rows(ColorSet A,
                                                              ColorSet S) const;

  // The link X_{x_S}: condition on x_S, renormalize, and keep the remaining
  // colors (renumbered 0..d-|S|-1 in increasing original-color order).
  ComplexPtr link(const SubAssignment& xs) const;

  void check_colors(ColorSet S, const char* what) const;

 private:
  friend ComplexPtr build_from_rows(int d, std::vector<int> color_sizes,
                                    std::vector<int32_t> verts,
                                    std::vector<double> weights,
                                    bool drop_zero_weights);

  int d_ = 0;
  std::vector<int> color_sizes_;
  std::vector<int32_t> verts_;    // flat, stride d
  std::vector<double> weights_;   // normalized, positive
  std::string id_;
  double correction_ = 1.0;
  bool renormalized_ = false;

  mutable std::mutex cache_mu_;
  mutable std::map<uint32_t, std::shared_ptr<const MarginalTable>> tables_;
  mutable std::map<uint64_t, std::shared_ptr<const std::vector<int32_t>>> projections_;
};

// ---- constructors ----------------------------------------------------------

// Faces given explicitly as (assignment, weight). Weights must be positive;
// they are normalized to total mass 1 and the correction factor is recorded.
// Ground set sizes are inferred as (max id + 1) per color unless supplied.
ComplexPtr build_explicit(
    const std::vector<std::pair<std::vector<int32_t>, double>>& faces,
    const std::vector<int>* color_sizes = nullptr);

// Product measure from per-color marginals (probabilities per vertex id).
// Zero-probability vertices simply drop out of the support.
ComplexPtr build_product(const std::vector<std::vector<double>>& marginals);

// Multiplies every weight by (1 + u), u ~ U[-eps, eps] from the seeded
// stream, then renormalizes. Requires eps in [0, 1); the support is kept.
ComplexPtr perturb(const PartiteComplex& X, double eps, uint64_t seed);

// Symmetrized embedding of a pure set system: each input d-set {v_1..v_d}
// of weight w becomes d! ordered faces of weight w/d!, with every color's
// ground set equal to the common universe.
ComplexPtr embed_symmetrized(
    const std::vector<std::pair<std::vector<int32_t>, double>>& sets);

// t-fold product of X with itself: d*t colors, product weights.
// Errors out when the resulting support would exceed max_support.
ComplexPtr tensor_power(const PartiteComplex& X, int t,
                        int max_support = 100000);

// ---- measure access --------------------------------------------------------

// Lightweight view of (support, weights) of X[S].
struct MeasureView {
  ComplexPtr X;
  ColorSet colors;
  const MarginalTable* table = nullptr;

  int rows() const { return table->rows(); }
  std::span<const int32_t> row(int r) const { return table->row(r); }
  double weight(int r) const { return table->weight[r]; }
};

MeasureView marginal(ComplexPtr X, ColorSet S);

// ---- face functions --------------------------------------------------------

// Real-valued function on the support of X[S]; values are indexed by the
// marginal table rows. All norms and inner products are taken in the
// marginal measure, never in counting measure.
class FaceFunction {
 public:
  FaceFunction() = default;

  static FaceFunction on(ComplexPtr X, ColorSet S, std::vector<double> values);
  static FaceFunction constant(ComplexPtr X, ColorSet S, double c);
  static FaceFunction basis(ComplexPtr X, ColorSet S, int row);

  const ComplexPtr& complex() const { return X_; }
  ColorSet domain() const { return domain_; }
  const MarginalTable& table() const { return *table_; }
  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int row) const { return values_[row]; }
  double& operator[](int row) { return values_[row]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  // Evaluation through the projection of a top face; the usual reading of
  // "f(x)" for f that depends only on the S-coordinates.
  double at_face(int face_index) const {
    return values_[table_->face_row[face_index]];
  }
  // Evaluation at an explicit sub-assignment; errors outside the support.
  double at(const SubAssignment& xs) const;

  double mean() const;
  double norm(double q) const;
  double norm2_sq() const;
  double inner(const FaceFunction& g) const;
  double sup_abs() const;

  // Reindex onto X[A] for A containing the domain (composition with the
  // coordinate projection).
  FaceFunction lift_to(ColorSet A) const;

  FaceFunction& operator+=(const FaceFunction& g);
  FaceFunction& operator-=(const FaceFunction& g);
  FaceFunction& operator*=(double c);
  friend FaceFunction operator+(FaceFunction f, const FaceFunction& g) {
    f += g;
    return f;
  }
  friend FaceFunction operator-(FaceFunction f, const FaceFunction& g) {
    f -= g;
    return f;
  }
  friend FaceFunction operator*(double c, FaceFunction f) {
    f *= c;
    return f;
  }
  FaceFunction pointwise_mul(const FaceFunction& g) const;

  void require_same_space(const FaceFunction& g, const char* what) const;

 private:
  ComplexPtr X_;
  ColorSet domain_;
  const MarginalTable* table_ = nullptr;
  std::vector<double> values_;
};

// f restricted to the link of x_S: a function on X_{x_S} over the remaining
// colors. f must live on the top faces. If the caller already built the
// link it can be passed to avoid rebuilding.
FaceFunction restrict_function(const FaceFunction& f, const SubAssignment& xs,
                               ComplexPtr link_complex = nullptr);

// Merge a sub-assignment on S with a row over the complement back into a
// full-length assignment.
std::vector<int32_t> merge_assignment(int d, const SubAssignment& xs,
                                      std::span<const int32_t> rest);

}  // namespace hdx
