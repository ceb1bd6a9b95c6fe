#include "hdx/oracle.hpp"

#include <cmath>

#include "hdx/rng.hpp"
#include "hdx/util.hpp"

namespace hdx {

double oracle_norm(const FaceFunction& f, double q) {
  if (!(q >= 1.0)) throw Error("oracle_norm: q must be >= 1");
  if (f.size() > 100000) throw Error("oracle_norm: support exceeds 1e5");
  const MarginalTable& tb = f.table();
  double acc = 0.0;
  for (int r = 0; r < f.size(); ++r)
    acc += tb.weight[r] * std::pow(std::fabs(f[r]), q);
  return std::pow(acc, 1.0 / q);
}

namespace {

double weighted_qn(const Eigen::VectorXd& v, const std::vector<double>& w,
                   double q) {
  double acc = 0.0;
  for (int i = 0; i < v.size(); ++i)
    acc += w[i] * std::pow(std::fabs(v[i]), q);
  return std::pow(acc, 1.0 / q);
}

}  // namespace

double oracle_opnorm_dense(const Eigen::MatrixXd& M,
                           const std::vector<double>& w_out,
                           const std::vector<double>& w_in, double q,
                           uint64_t seed, int starts, int iters) {
  const int n = static_cast<int>(M.cols());
  const int m = static_cast<int>(M.rows());
  if (n < 1 || n > 6)
    throw Error("oracle_opnorm_dense: column count must be in [1, 6]");
  if (static_cast<int>(w_in.size()) != n ||
      static_cast<int>(w_out.size()) != m)
    throw Error("oracle_opnorm_dense: weight sizes do not match the kernel");
  if (!(q > 1.0)) throw Error("oracle_opnorm_dense: q must be > 1");

  Rng rng(seed);
  double best = 0.0;
  auto consider = [&](Eigen::VectorXd x) {
    const double nx = weighted_qn(x, w_in, q);
    if (!(nx > 0.0)) return;
    x /= nx;
    best = std::max(best, weighted_qn(M * x, w_out, q));
  };

  for (uint32_t pattern = 0; pattern < (1u << n); ++pattern) {
    Eigen::VectorXd sign(n);
    for (int j = 0; j < n; ++j) sign[j] = (pattern >> j) & 1u ? -1.0 : 1.0;
    for (int s = 0; s < starts; ++s) {
      Eigen::VectorXd u(n);
      for (int j = 0; j < n; ++j)
        u[j] = s == 0 ? 1.0 : std::fabs(rng.normal()) + 1e-3;
      for (int it = 0; it < iters; ++it) {
        Eigen::VectorXd x = sign.cwiseProduct(u);
        const double nx = weighted_qn(x, w_in, q);
        if (!(nx > 0.0)) break;
        x /= nx;
        consider(x);
        // Gradient direction of ||Mx||_q^q under the input measure,
        // folded back into the orthant.
        Eigen::VectorXd g = M * x;
        for (int i = 0; i < m; ++i)
          g[i] = w_out[i] * std::pow(std::fabs(g[i]), q - 1.0) *
                 (g[i] < 0 ? -1.0 : 1.0);
        Eigen::VectorXd z = M.transpose() * g;
        double sup = 0.0;
        for (int j = 0; j < n; ++j) {
          double dir = sign[j] * z[j] / w_in[j];
          u[j] = dir > 0.0 ? std::pow(dir, 1.0 / (q - 1.0)) : 0.0;
          sup = std::max(sup, u[j]);
        }
        if (!(sup > 0.0)) break;
        u /= sup;
      }
      Eigen::VectorXd x = sign.cwiseProduct(u);
      consider(x);
    }
  }
  return best;
}

}  // namespace hdx
