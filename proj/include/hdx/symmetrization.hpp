#pragma once

// Symmetrization: attach a uniform sign vector r in {-1,+1}^d to the
// underlying space and study
//   f~(r, x) = sum_S r_S f^{=S}(x),   r_S = prod_{i in S} r_i,
// under the product measure (uniform on r) x (top-face weights). The noised
// variant replaces the coefficients by rho_S f^{=S}(x), which on products
// coincides with symmetrizing T_rho f. The sandwich
//   ||(T_{c_q} f)~||_q <= ||f||_q <= ||(T_2 f)~||_q
// is exact on products (c_q = 2/5 for q in {4, 4/3}) and diagnostic
// elsewhere. Also here: the coordinate decorrelation and localization
// checks and the scalar one-dimensional lemmas behind the sandwich.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "hdx/complex.hpp"
#include "hdx/efron_stein.hpp"

namespace hdx {

inline constexpr int kSymMaxDim = 12;

// Dense 2^d x |support| table of f~. Row index m encodes the sign vector
// with r_i = -1 iff bit i of m is set (so row 0 is the all-ones row).
struct SymmetrizedFunction {
  ComplexPtr X;
  Eigen::MatrixXd table;

  int dimension() const { return X->dimension(); }
  double value(uint32_t r_mask, int face) const { return table(r_mask, face); }

  // q-norm in the joint measure (uniform signs x face weights).
  double norm(double q) const;

  // Per-face boolean Fourier coefficient of f~(., x) at S; recovers the
  // Efron-Stein component (lifted) for symmetrize, rho_S f^{=S} in general.
  Eigen::VectorXd coefficient(ColorSet S) const;

  // Row 0 as a face function; equals f for symmetrize(f).
  FaceFunction at_all_ones() const;
};

SymmetrizedFunction symmetrize(const FaceFunction& f);

// (T_rho f)~ built directly from the coefficients rho_S f^{=S}(x).
SymmetrizedFunction symmetrize_noised(const FaceFunction& f,
                                      const std::vector<double>& rho);

double sym_noise_norm(const FaceFunction& f, const std::vector<double>& rho,
                      double q);
double sym_noise_norm(const FaceFunction& f, double rho, double q);

struct SandwichParams {
  double q = 4.0;
  // Defaults to 2/5 for q in {4, 4/3}; required explicitly otherwise.
  std::optional<double> c_q;
};

struct SandwichCheck {
  double q = 0.0, c_q = 0.0;
  double f_norm = 0.0;      // ||f||_q
  double lower_norm = 0.0;  // ||(T_{c_q} f)~||_q
  double upper_norm = 0.0;  // ||(T_2 f)~||_q
  double lower_factor = 0.0;  // lower_norm / f_norm
  double upper_factor = 0.0;  // f_norm / upper_norm
  // Inequalities at zero expansion slack; diagnostic off products.
  bool pass_lower = false, pass_upper = false;
};

SandwichCheck sandwich_check(const FaceFunction& f,
                             const SandwichParams& params = {});

struct DecorrelationCheck {
  double measured = 0.0;  // ||T_r f - T^{pi(1)}_{r} ... T^{pi(d)}_{r} f||_q
  double bound = 0.0;     // c_{d,r} gamma_q ||f||_q
  double c_dr = 0.0;      // d^3 sum_S |r_S prod_{i notin S}(1 - r_i)|
  double gamma = 0.0;
  double gamma_q = 0.0;
  bool pass = false;
};

// Joint noise against the composition of single-coordinate noises in the
// order pi (pi.front() applied last). Measured value is exactly 0 on
// products for every permutation.
DecorrelationCheck decorrelation_check(const FaceFunction& f,
                                       const std::vector<double>& r,
                                       const std::vector<int>& pi, double q);

// Max over top faces of |T^S_r f(x) - T^{x_Sbar}_r f|_{x_Sbar}(x_S)|: the
// coordinate noise on S computed globally versus inside the link of the
// complementary assignment. Exact (<= 1e-9) on every complex.
double localization_check(const FaceFunction& f, ColorSet S,
                          const std::vector<double>& r);

// Finite real distribution for the scalar lemmas.
struct ScalarDist {
  std::vector<double> values;
  std::vector<double> probs;

  double moment(double a, double t, double q) const;  // ||a + tX||_q
};

struct ScalarSymCheck {
  double q = 0.0;
  double half_lhs = 0.0, half_rhs = 0.0;   // ||a + X/2||_q vs ||a + rX||_q
  bool pass_half = false;
  double lower_lhs = 0.0, lower_rhs = 0.0;  // ||a - (2/5)X||_4 vs ||a + X||_4
  bool pass_lower = true;                   // only checked at q = 4
};

// Exact enumeration of the one-dimensional lemmas: the random-sign average
// ||a + rX||_q = (E_r E_X |a + rX|^q)^{1/q} dominates ||a + X/2||_q, and at
// q = 4 the reflected ||a - (2/5)X||_4 is dominated by ||a + X||_4. X must
// have mean 0 (within 1e-12) and probabilities summing to 1.
ScalarSymCheck scalar_symmetrization_check(double a, const ScalarDist& dist,
                                           double q);

// Largest c in [0, 1] such that ||a - cX||_q <= ||a + X||_q survives a fixed
// seeded probe family of mean-zero distributions. Heuristic: an estimate of
// the sharp constant, certified only on the probes; q < 2 defers to the
// conjugate exponent. For q in {4, 4/3} the proven 2/5 always survives.
double heuristic_c_q(double q, int probes = 64, uint64_t seed = 2026);

}  // namespace hdx
