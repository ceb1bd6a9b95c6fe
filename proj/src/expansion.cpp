#include "hdx/expansion.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "hdx/parallel.hpp"
#include "hdx/rng.hpp"

namespace hdx {

namespace {

Eigen::VectorXd table_weights(const MarginalTable& t) {
  Eigen::VectorXd w(t.rows());
  for (int r = 0; r < t.rows(); ++r) w[r] = t.weight[r];
  return w;
}

double weighted_norm(const Eigen::VectorXd& v, const Eigen::VectorXd& w,
                     double q) {
  double acc = 0.0;
  for (int i = 0; i < v.size(); ++i)
    acc += w[i] * std::pow(std::fabs(v[i]), q);
  return std::pow(acc, 1.0 / q);
}

// D_out^{1/2} M D_in^{-1/2}: singular values of this matrix are the singular
// values of M between the weighted L2 spaces.
Eigen::MatrixXd conjugated(const Eigen::MatrixXd& M, const Eigen::VectorXd& wo,
                           const Eigen::VectorXd& wi) {
  Eigen::MatrixXd B = M;
  for (int t = 0; t < B.rows(); ++t)
    for (int s = 0; s < B.cols(); ++s)
      B(t, s) *= std::sqrt(wo[t] / wi[s]);
  return B;
}

double top_singular(const Eigen::MatrixXd& B) {
  if (B.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
  return svd.singularValues()(0);
}

struct MatView {
  const Eigen::MatrixXd& M;
  Eigen::VectorXd w_out, w_in;
};

MatView view_of(const Operator& M) {
  return MatView{M.materialize(),
                 table_weights(M.complex()->marginal_table(M.codomain())),
                 table_weights(M.complex()->marginal_table(M.domain()))};
}

struct AscentResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = true;
};

// Boyd nonlinear power iteration for ||M||_{q->q} between weighted spaces.
// The iterate stays on the unit sphere of L_q(w_in); each step is
//   g = Mf, u = |g|^{q-1} sign g, z = M^dagger u, f' = |z|^{q'-1} sign z,
// with the adjoint taken in the weighted inner products. The attained ratio
// ||Mf||_q is nondecreasing along the iteration.
AscentResult boyd_ascent(const MatView& mv, double q,
                         const AscentOptions& opts) {
  const Eigen::MatrixXd& M = mv.M;
  const int n_in = static_cast<int>(M.cols());
  const int n_out = static_cast<int>(M.rows());
  const double qp = q / (q - 1.0);

  AscentResult best;
  for (int start = 0; start < opts.starts; ++start) {
    Rng rng(mix_seed(opts.seed, static_cast<uint64_t>(start) + 1));
    Eigen::VectorXd f(n_in);
    for (int s = 0; s < n_in; ++s) f[s] = rng.normal();
    double fn = weighted_norm(f, mv.w_in, q);
    if (fn <= 0.0) continue;
    f /= fn;

    double last = 0.0;
    bool settled = false;
    for (int it = 0; it < opts.max_iters; ++it) {
      ++best.iterations;
      Eigen::VectorXd g = M * f;
      const double val = weighted_norm(g, mv.w_out, q);
      best.value = std::max(best.value, val);
      if (val <= 0.0) {
        settled = true;
        break;
      }
      if (it > 0 && std::fabs(val - last) <= opts.rel_tol * std::max(1.0, val)) {
        settled = true;
        break;
      }
      last = val;

      Eigen::VectorXd u(n_out);
      for (int t = 0; t < n_out; ++t)
        u[t] = std::copysign(std::pow(std::fabs(g[t]), q - 1.0), g[t]);
      Eigen::VectorXd z(n_in);
      for (int s = 0; s < n_in; ++s) {
        double acc = 0.0;
        for (int t = 0; t < n_out; ++t) acc += mv.w_out[t] * M(t, s) * u[t];
        z[s] = acc / mv.w_in[s];
      }
      for (int s = 0; s < n_in; ++s)
        f[s] = std::copysign(std::pow(std::fabs(z[s]), qp - 1.0), z[s]);
      fn = weighted_norm(f, mv.w_in, q);
      if (fn <= 0.0) {
        settled = true;
        break;
      }
      f /= fn;
    }
    if (!settled) best.converged = false;
  }
  return best;
}

double interp_upper(const MatView& mv, double q) {
  const double s2 = top_singular(conjugated(mv.M, mv.w_out, mv.w_in));
  if (q == 2.0) return s2;
  if (q > 2.0) {
    double ninf = 0.0;
    for (int t = 0; t < mv.M.rows(); ++t)
      ninf = std::max(ninf, mv.M.row(t).cwiseAbs().sum());
    const double th = 2.0 / q;
    return std::pow(s2, th) * std::pow(ninf, 1.0 - th);
  }
  double n1 = 0.0;
  for (int s = 0; s < mv.M.cols(); ++s) {
    double col = 0.0;
    for (int t = 0; t < mv.M.rows(); ++t) col += mv.w_out[t] * std::fabs(mv.M(t, s));
    n1 = std::max(n1, col / mv.w_in[s]);
  }
  const double th = 2.0 / q - 1.0;
  return std::pow(n1, th) * std::pow(s2, 1.0 - th);
}

// lambda2 of the bipartite walk between link colors a < b: top singular
// value of (J_st - P_a(s) P_b(t)) / sqrt(P_a(s) P_b(t)).
double link_pair_lambda2(const PartiteComplex& L, int a, int b,
                         bool* degenerate) {
  const MarginalTable& pa = L.marginal_table(ColorSet::single(a));
  const MarginalTable& pb = L.marginal_table(ColorSet::single(b));
  *degenerate = pa.rows() < 2 || pb.rows() < 2;
  if (*degenerate) return 0.0;
  const MarginalTable& joint = L.marginal_table(ColorSet::of({a, b}));
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(pa.rows(), pb.rows());
  for (int r = 0; r < joint.rows(); ++r) {
    auto row = joint.row(r);
    const int32_t ka[1] = {row[0]}, kb[1] = {row[1]};
    B(pa.find(ka), pb.find(kb)) = joint.weight[r];
  }
  for (int s = 0; s < pa.rows(); ++s)
    for (int t = 0; t < pb.rows(); ++t) {
      const double prod = pa.weight[s] * pb.weight[t];
      B(s, t) = (B(s, t) - prod) / std::sqrt(prod);
    }
  return top_singular(B);
}

}  // namespace

double opnorm_2_svd(const Operator& M) {
  MatView mv = view_of(M);
  return top_singular(conjugated(mv.M, mv.w_out, mv.w_in));
}

double opnorm_q_interp_upper(const Operator& M, double q) {
  if (q <= 1.0) throw Error("opnorm_q_interp_upper: q must exceed 1");
  return interp_upper(view_of(M), q);
}

NormEstimate opnorm_q_lower(const Operator& M, double q,
                            const AscentOptions& opts) {
  if (q <= 1.0) throw Error("opnorm_q_lower: q must exceed 1");
  if (opts.starts < 1) throw Error("opnorm_q_lower: need at least one start");
  MatView mv = view_of(M);
  AscentResult res = boyd_ascent(mv, q, opts);
  NormEstimate out;
  out.lower = res.value;
  out.upper = interp_upper(mv, q);
  out.method = q == 2.0 ? "ascent|svd" : "ascent|riesz-thorin";
  out.iterations = res.iterations;
  out.seed = opts.seed;
  out.converged = res.converged;
  return out;
}

double gamma_q_upper(double gamma, double q) {
  if (q <= 1.0) throw Error("gamma_q_upper: q must exceed 1");
  if (gamma < 0.0 || gamma > 1.0)
    throw Error("gamma_q_upper: gamma must lie in [0, 1]");
  const double e = q >= 2.0 ? 2.0 / q : 2.0 * (q - 1.0) / q;
  return std::pow(gamma, e) * std::pow(2.0, 1.0 - e);
}

ExpansionCertificate gamma_certificate(const ComplexPtr& X,
                                       const CertificateOptions& opts) {
  if (!X) throw Error("gamma_certificate: empty complex");
  const int d = X->dimension();
  if (d < 2) throw Error("gamma_certificate: dimension must be at least 2");

  struct Conditioning {
    SubAssignment tau;
    ComplexPtr link;
    std::vector<int> rest;  // original color per link color
  };
  std::vector<Conditioning> conds;
  for_each_subset(ColorSet::all(d), [&](ColorSet Tau) {
    if (Tau.size() > d - 2) return;
    const ColorSet rest = Tau.complement(d);
    if (Tau.empty()) {
      conds.push_back({SubAssignment{Tau, {}}, X, rest.members()});
      return;
    }
    const MarginalTable& t = X->marginal_table(Tau);
    for (int r = 0; r < t.rows(); ++r) {
      auto row = t.row(r);
      conds.push_back({SubAssignment{Tau, {row.begin(), row.end()}}, nullptr,
                       rest.members()});
    }
  });
  parallel_for(
      static_cast<int>(conds.size()),
      [&](size_t k) {
        if (!conds[k].link) conds[k].link = X->link(conds[k].tau);
      },
      opts.jobs);

  struct PairJob {
    int cond = 0;
    int a = 0, b = 0;  // link colors
  };
  std::vector<PairJob> pairs;
  for (int k = 0; k < static_cast<int>(conds.size()); ++k) {
    const int m = conds[k].link->dimension();
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) pairs.push_back({k, a, b});
  }

  ExpansionCertificate cert;
  cert.complex_id = X->id();
  cert.entries.resize(pairs.size());
  parallel_for(
      static_cast<int>(pairs.size()),
      [&](size_t k) {
        const PairJob& pj = pairs[k];
        const Conditioning& c = conds[pj.cond];
        LinkWalkEntry e;
        e.tau = c.tau;
        e.i = c.rest[pj.a];
        e.j = c.rest[pj.b];
        e.lambda2 = link_pair_lambda2(*c.link, pj.a, pj.b, &e.degenerate);
        cert.entries[k] = std::move(e);
      },
      opts.jobs);
  for (const LinkWalkEntry& e : cert.entries) {
    cert.gamma = std::max(cert.gamma, e.lambda2);
    if (e.degenerate) ++cert.degenerate_count;
  }

  if (!opts.qs.empty()) {
    const double g = std::clamp(cert.gamma, 0.0, 1.0);
    for (double q : opts.qs) {
      std::vector<double> lows(pairs.size(), 0.0);
      parallel_for(
          static_cast<int>(pairs.size()),
          [&](size_t k) {
            const PairJob& pj = pairs[k];
            const Conditioning& c = conds[pj.cond];
            const MarginalTable& pa =
                c.link->marginal_table(ColorSet::single(pj.a));
            const MarginalTable& pb =
                c.link->marginal_table(ColorSet::single(pj.b));
            if (pa.rows() < 2 || pb.rows() < 2) return;
            Operator M =
                swap_walk(c.link, ColorSet::single(pj.a),
                          ColorSet::single(pj.b)) -
                stationary(c.link, ColorSet::single(pj.a), ColorSet::single(pj.b));
            AscentOptions ao = opts.ascent;
            ao.seed = mix_seed(opts.ascent.seed,
                               fnv1a_u64(fnv1a(c.link->id()),
                                         (static_cast<uint64_t>(pj.a) << 32) |
                                             static_cast<uint64_t>(pj.b)));
            lows[k] = opnorm_q_lower(M, q, ao).lower;
          },
          opts.jobs);
      QNormEntry qe;
      qe.q = q;
      qe.lower = *std::max_element(lows.begin(), lows.end());
      qe.upper = gamma_q_upper(g, q);
      cert.q_entries.push_back(qe);
    }
  }
  return cert;
}

SwapNormCheck swap_norm_check(const ComplexPtr& X, ColorSet S, ColorSet T,
                              double q, const AscentOptions& opts) {
  Operator M = swap_walk(X, S, T) - stationary(X, S, T);
  SwapNormCheck out;
  out.estimate = opnorm_q_lower(M, q, opts);
  out.measured = out.estimate.lower;
  ExpansionCertificate cert = gamma_certificate(X);
  out.gamma = cert.gamma;
  out.bound = S.size() * T.size() *
              gamma_q_upper(std::clamp(cert.gamma, 0.0, 1.0), q);
  out.slack = out.bound - out.measured;
  out.pass = out.measured <= out.bound + 1e-9;
  return out;
}

}  // namespace hdx
