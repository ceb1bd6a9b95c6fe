#pragma once

// Global hypercontractivity toolkit: r-globalness profiling, the
// Bonami-form and operator-form inequalities, KKL-style density witnesses,
// booster search, and notable-coordinate extraction.
//
// Globalness uses the squared convention throughout: f is r-global when
//   ||f|_{x_S}||_2^2 <= r^{|S|} ||f||_2^2   for every S and feasible x_S.
//
// Every search here is exhaustive and intended for desk scale; dimensions
// above 8 and restriction sizes above 4 are rejected outright.

#include <cstdint>
#include <string>
#include <vector>

#include "hdx/complex.hpp"
#include "hdx/efron_stein.hpp"

namespace hdx {

inline constexpr int kHyperMaxDim = 8;
inline constexpr int kHyperMaxCap = 4;

// ---- globalness -------------------------------------------------------

struct GlobalnessProfile {
  // by_size[s] = max over |S| = s and x_S of ||f|_{x_S}||_2^2 / ||f||_2^2;
  // by_size[0] == 1 always.
  std::vector<double> by_size;
  // Smallest r with ||f|_{x_S}||_2^2 <= r^{|S|} ||f||_2^2 everywhere,
  // i.e. max over nonempty S of by_size[|S|]^{1/|S|}; at least 1.
  double minimal_r = 1.0;
};

GlobalnessProfile globalness(const FaceFunction& f);

// ---- hypercontractive inequalities --------------------------------------

// lhs = ||f^{<=i}||_q^q against
// rhs = (500 q)^{q i} ||f^{<=i}||_2^2 max_{|S| <= i, x_S} ||f|_{x_S}||_2^{q-2}.
struct BonamiCheck {
  int i = 0;
  double q = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double low2_sq = 0.0;              // ||f^{<=i}||_2^2
  double max_restriction_sq = 0.0;   // max_{|S| <= i, x_S} ||f|_{x_S}||_2^2
  double ratio = 0.0;                // lhs / rhs
  bool pass = false;
};

BonamiCheck bonami_check(const FaceFunction& f, int i, double q);

// Diagnostic record of ||T_rho f||_q against ||f||_2 for a function of
// globalness r; in_regime flags rho <= 1/(r q).
struct OperatorFormCheck {
  double rho = 0.0;
  double q = 0.0;
  double r = 1.0;
  double lhs = 0.0;      // ||T_rho f||_q
  double f_norm2 = 0.0;
  double slack = 0.0;    // lhs / ||f||_2 - 1
  bool in_regime = false;
};

OperatorFormCheck operator_form_check(const FaceFunction& f, double rho,
                                      double q);

// The 1-D (4/3, 2) step behind the level-i machinery, asserted on every
// column of the symmetrization table: for each feasible top face x, the
// column g = ftilde(., x) over uniform signs satisfies
// ||T_{1/sqrt3} g||_2 <= ||g||_{4/3}.
struct TwoVsFourThirdsCheck {
  double worst_margin = 0.0;  // max over x of lhs - rhs
  int32_t worst_face = -1;
  bool pass = false;
};

TwoVsFourThirdsCheck two_vs_four_thirds_check(const FaceFunction& f);

// ---- KKL witness ---------------------------------------------------------

// Exhaustive argmax of E[f|_{x_S}] over |S| <= size_cap for f with values
// in {0,1}; ties prefer smaller |S|, then lexicographic S, then
// lexicographic x_S.
struct KKLWitness {
  ColorSet S;
  std::vector<int32_t> assignment;
  double density = 0.0;  // E[f|_{x_S}]
  double mean = 0.0;     // E[f]
  std::string convention = "01";
};

KKLWitness kkl_witness(const FaceFunction& f, int size_cap);

// ---- boosters ------------------------------------------------------------

// x_T with |E[f|_{x_T}] - E[f]| >= tau, for f with values in {+-1}.
struct BoosterRecord {
  ColorSet T;
  std::vector<int32_t> assignment;
  double conditional = 0.0;  // E[f|_{x_T}]
  double deviation = 0.0;    // |E[f|_{x_T}] - E[f]|

  int size() const { return T.size(); }
};

struct BoosterSearchResult {
  // Deduplicated, sorted by deviation descending (then size, T, x_T).
  std::vector<BoosterRecord> boosters;
  // Pr_x[some T with |T| <= size_cap makes x_T a booster] under the face
  // measure.
  double covered_mass = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double tau = 0.0;
  int size_cap = 0;
  std::string convention = "pm1";
};

BoosterSearchResult booster_search(const FaceFunction& f, int size_cap,
                                   double tau);

// size_cap = ceil(2K), tau = 2^{-K^2}.
struct BoosterDefaults {
  int size_cap = 0;
  double tau = 0.0;
};

BoosterDefaults booster_defaults(double K);

// ---- notable coordinates ---------------------------------------------------

// J'_x = { j : sum_{S ni j} f^{=S}(x)^2 >= tau }, truncated to empty when
// |J'_x| exceeds C^ell. residual_mass = sum_{S notin F_x} f^{=S}(x)^2 with
// F_x = { S : S subset J_x, |S| <= ell }.
struct NotableCoordinates {
  int32_t face = -1;
  ColorSet J_prime;
  ColorSet J;
  bool truncated = false;
  double residual_mass = 0.0;
  double tau = 0.0;
  int ell = 0;
  double cap = 0.0;  // C^ell
};

NotableCoordinates notable_coordinates(const EfronSteinDecomposition& dec,
                                       int32_t face, double tau, int ell,
                                       double C);
NotableCoordinates notable_coordinates(const FaceFunction& f, int32_t face,
                                       double tau, int ell, double C);

// ---- conventions -----------------------------------------------------------

// Vertex-value conventions: 0 <-> -1, 1 <-> +1. Both error when a value
// strays from the expected set by more than 1e-12.
FaceFunction boolean_to_pm1(const FaceFunction& f);
FaceFunction pm1_to_boolean(const FaceFunction& f);

// f^{oplus t}(x_1..x_t) = prod_b f(x_b) on tensor_power(X, t); the complex
// is built internally and available through the result.
FaceFunction tensor_power_function(const FaceFunction& f, int t);

}  // namespace hdx
