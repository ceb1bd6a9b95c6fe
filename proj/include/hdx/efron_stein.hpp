#pragma once

// Efron-Stein decomposition on weighted partite complexes. The identities
// implemented here are exact on every complex (no product structure and no
// expansion is assumed):
//
//   f^{=S} = sum_{T subset S} (-1)^{|S|-|T|} E_T f,
//   E_S f  = sum_{T subset S} f^{=T},           f = sum_S f^{=S},
//   T_r f  = sum_S r_S f^{=S},
//   L_i f  = sum_{S : i in S} f^{=S},
//   I[f]   = sum_i <f, L_i f> = sum_i i <f, f^{=i}>.
//
// Each component depends only on the S-coordinates and is stored on X[S].
// Orthogonality of distinct components, on the other hand, is a product
// phenomenon; on expanding complexes it only holds up to gamma slack.

#include <vector>

#include "hdx/complex.hpp"

namespace hdx {

struct EfronSteinDecomposition {
  ComplexPtr X;
  std::vector<FaceFunction> components;  // indexed by ColorSet bits

  int dimension() const { return X->dimension(); }
  const FaceFunction& component(ColorSet S) const {
    return components[S.bits()];
  }
  // Component composed with the coordinate projection, on the top faces.
  FaceFunction lifted(ColorSet S) const;
};

EfronSteinDecomposition decompose(const FaceFunction& f);

// Single component without computing the whole family.
FaceFunction es_component(const FaceFunction& f, ColorSet S);

// f^{<=i} and f^{=i}, both on the top faces.
FaceFunction truncate(const EfronSteinDecomposition& dec, int i);
FaceFunction level_part(const EfronSteinDecomposition& dec, int i);

// sum_S (prod_{i in S} r_i) f^{=S}: the decomposition form of the noise
// operator; agrees exactly with the binomial-of-projections form.
FaceFunction es_noise_apply(const EfronSteinDecomposition& dec,
                            const std::vector<double>& r);

struct TotalInfluence {
  double via_laplacians = 0.0;  // sum_i <f, L_i f>
  double via_levels = 0.0;      // sum_i i <f, f^{=i}>
};
TotalInfluence total_influence(const FaceFunction& f,
                               const EfronSteinDecomposition& dec);
TotalInfluence total_influence(const FaceFunction& f);

struct LevelProfile {
  std::vector<double> weight;   // W_i = sum_{|S|=i} ||f^{=S}||_2^2
  std::vector<double> pairing;  // <f, f^{=i}>
};
LevelProfile level_profile(const EfronSteinDecomposition& dec,
                           const FaceFunction& f);

// Max absolute discrepancy, over the support of X[I u B] (or a seeded
// sample of sample_budget rows when positive), of the restriction identity
//   f^{=I u B}(y_I, x_B) =
//       sum_{J subset I} (-1)^{|I|-|J|} (f|_{y_J})^{=B}(x_B),
// where the inner component is taken in the link of y_J. Exact (zero up to
// rounding) on every complex; I and B must be disjoint.
double restriction_identity_check(const FaceFunction& f, ColorSet I,
                                  ColorSet B, int sample_budget = 0,
                                  uint64_t seed = 0);

}  // namespace hdx
