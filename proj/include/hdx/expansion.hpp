#pragma once

// Expansion certification. A complex is a gamma-product when every bipartite
// walk A^tau_{ij} between two colors inside a link of co-dimension >= 2 has
// ||A^tau_{ij} - Pi^tau_{ij}||_2 <= gamma; products achieve gamma = 0 and a
// perfect matching achieves gamma = 1. The q-norm side is handled by
// interpolation (gamma_q_upper) and by multi-start nonlinear power iteration
// for certified lower bounds. All norms are taken in the marginal measures,
// never in counting measure.

#include <cstdint>
#include <string>
#include <vector>

#include "hdx/complex.hpp"
#include "hdx/operators.hpp"

namespace hdx {

struct AscentOptions {
  int starts = 32;
  int max_iters = 500;
  double rel_tol = 1e-10;
  uint64_t seed = 0;
};

// Interval estimate of an operator q-norm. lower comes from ascent (always a
// true lower bound); upper from SVD (q = 2) or Riesz-Thorin interpolation.
struct NormEstimate {
  double lower = 0.0;
  double upper = 0.0;
  std::string method;
  int iterations = 0;  // Boyd steps summed over starts
  uint64_t seed = 0;
  bool converged = true;  // every start met rel_tol before the cap
};

// Weighted 2-norm of M as an operator L2(domain) -> L2(codomain): the top
// singular value of D_cod^{1/2} M D_dom^{-1/2}.
double opnorm_2_svd(const Operator& M);

// Riesz-Thorin upper bound on ||M||_{q->q}, interpolating 2 <-> infinity for
// q > 2 and 1 <-> 2 for q < 2, with the endpoint norms read off the
// materialized matrix.
double opnorm_q_interp_upper(const Operator& M, double q);

// Multi-start Boyd ascent lower bound on ||M||_{q->q}; pair it with the
// interpolation upper bound. Pass M with its stationary part removed when
// estimating ||A - Pi||.
NormEstimate opnorm_q_lower(const Operator& M, double q,
                            const AscentOptions& opts = {});

// gamma_q: a gamma-product is a (q, gamma_q)-product with
//   gamma_q = gamma^{2/q} 2^{1-2/q}            for q >= 2,
//   gamma_q = gamma^{2(q-1)/q} 2^{1-2(q-1)/q}  for 1 < q < 2 (dual pairs
// q and q/(q-1) get the same value).
double gamma_q_upper(double gamma, double q);

struct LinkWalkEntry {
  SubAssignment tau;  // conditioned sub-assignment; empty for the top level
  int i = 0, j = 0;   // color pair in the original colors, i < j
  double lambda2 = 0.0;
  bool degenerate = false;  // a side has a single support point
};

struct QNormEntry {
  double q = 2.0;
  double lower = 0.0;  // best measured ||A - Pi||_q over all link walks
  double upper = 0.0;  // gamma_q_upper(gamma, q)
};

struct ExpansionCertificate {
  std::string complex_id;
  double gamma = 0.0;
  std::vector<LinkWalkEntry> entries;
  std::vector<QNormEntry> q_entries;
  int degenerate_count = 0;
};

struct CertificateOptions {
  std::vector<double> qs;  // q values to bracket (optional, costs ascent runs)
  AscentOptions ascent;
  int jobs = 0;  // 0 = default worker count
};

// Sweep every feasible conditioning on <= d-2 colors and every color pair
// outside it; lambda2 per walk, gamma = max.
ExpansionCertificate gamma_certificate(const ComplexPtr& X,
                                       const CertificateOptions& opts = {});

struct SwapNormCheck {
  double measured = 0.0;  // ascent lower bound on ||A_{S,T} - Pi_{S,T}||_q
  double bound = 0.0;     // |S||T| gamma_q
  double gamma = 0.0;     // spectral gamma of the complex
  double slack = 0.0;     // bound - measured
  bool pass = false;
  NormEstimate estimate;
};

// ||A_{S,T} - Pi_{S,T}||_q <= |S||T| gamma_q, measured against the
// certificate of X. S and T must be disjoint and nonempty.
SwapNormCheck swap_norm_check(const ComplexPtr& X, ColorSet S, ColorSet T,
                              double q, const AscentOptions& opts = {});

}  // namespace hdx
