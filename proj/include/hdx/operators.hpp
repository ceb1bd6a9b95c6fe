#pragma once

// Walk operators between face-function spaces, built from four primitive
// kinds (conditional averaging, stationary, lift, identity) closed under
// scaling, sums and composition.
//
// The basic averaging kernel maps f on X[A] to the function
//   y_T |-> E[f(x_A) | x_T = y_T]
// on X[T]. Specializations: E_T = averaging from the top faces; the swap
// walk A_{S,T} is averaging between disjoint color sets; noise operators,
// coordinate noise and partite Laplacians are assembled as combinations of
// lifted projections. Operators are immutable; apply() is matrix-free and
// materialize() produces (and caches) the dense matrix in the value basis,
// rows indexed by the codomain support and columns by the domain support.

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "hdx/complex.hpp"

namespace hdx {

class Operator {
 public:
  Operator() = default;

  const ComplexPtr& complex() const;
  ColorSet domain() const;
  ColorSet codomain() const;
  // Human-readable construction signature, stable across runs.
  std::string signature() const;

  FaceFunction apply(const FaceFunction& f) const;
  const Eigen::MatrixXd& materialize() const;

  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(double c, const Operator& a);
  // compose(a, b): apply b first, then a. Requires b.codomain == a.domain.
  friend Operator compose(const Operator& a, const Operator& b);

  struct Node;
  explicit Operator(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  const Node* node() const { return node_.get(); }

 private:
  std::shared_ptr<const Node> node_;
};

// E[f(x_A) | x_T]: functions on X[A] to functions on X[T]. A and T may
// overlap arbitrarily.
Operator averaging(ComplexPtr X, ColorSet A, ColorSet T);

// E_T = averaging from the full color set.
Operator projection_E(ComplexPtr X, ColorSet T);

// Swap walk A_{S,T} between disjoint nonempty color sets.
Operator swap_walk(ComplexPtr X, ColorSet S, ColorSet T);

// Stationary operator Pi_{S,T}: f |-> constant E[f] placed on X[T].
Operator stationary(ComplexPtr X, ColorSet S, ColorSet T);

// Reindexing X[S] -> X[A] along the projection, S subset of A.
Operator lift(ComplexPtr X, ColorSet S, ColorSet A);

Operator identity(ComplexPtr X, ColorSet S);

// Vector-valued noise T_r on top-face functions, assembled in the
// binomial-of-projections form
//   T_r = sum_S (prod_{i in S} r_i)(prod_{i notin S} (1 - r_i)) E_S,
// with E_S lifted back to the top faces. Entries of r may be negative.
Operator noise_operator(ComplexPtr X, const std::vector<double>& r);
Operator noise_operator(ComplexPtr X, double rho);

// Coordinate-wise noise on the colors of S:
//   T^S_r = sum_{T subset S} r_{S\T} prod_{i in T}(1 - r_i) E_{[d]\T}.
// r is indexed by color; entries outside S are ignored. For a singleton
// this is r_i * Id + (1 - r_i) * E_{[d]\{i}}, and T^{[d]}_r recovers T_r.
Operator coord_noise(ComplexPtr X, ColorSet S, const std::vector<double>& r);

// Partite Laplacian L_i = Id - E_{[d]\{i}} (lifted back to the top faces).
Operator laplacian(ComplexPtr X, int i);

}  // namespace hdx
