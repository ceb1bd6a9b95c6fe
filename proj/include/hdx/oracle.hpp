#pragma once

// Brute-force reference computations, kept deliberately independent of the
// main numeric paths so they can arbitrate disagreements.

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "hdx/complex.hpp"

namespace hdx {

// Weighted q-norm by direct summation; support capped at 1e5.
double oracle_norm(const FaceFunction& f, double q);

// q -> q operator norm of a small dense kernel between weighted spaces,
// by exhaustive search over input sign patterns with projected nonlinear
// power iterations inside each orthant. Columns capped at 6.
double oracle_opnorm_dense(const Eigen::MatrixXd& M,
                           const std::vector<double>& w_out,
                           const std::vector<double>& w_in, double q,
                           uint64_t seed = 7, int starts = 24,
                           int iters = 400);

}  // namespace hdx
