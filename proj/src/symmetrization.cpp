#include "hdx/symmetrization.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "hdx/expansion.hpp"
#include "hdx/operators.hpp"
#include "hdx/parallel.hpp"
#include "hdx/rng.hpp"

namespace hdx {

namespace {

void require_top(const FaceFunction& f, const char* what) {
  if (!f.complex()) throw Error(std::string(what) + ": empty function");
  if (f.domain() != ColorSet::all(f.complex()->dimension()))
    throw Error(std::string(what) + ": f must live on the top faces");
}

SymmetrizedFunction build_table(const FaceFunction& f,
                                const std::vector<double>* rho) {
  require_top(f, "symmetrize");
  const ComplexPtr& X = f.complex();
  const int d = X->dimension();
  if (d > kSymMaxDim) throw Error("symmetrize: dimension cap is 12");
  if (rho && static_cast<int>(rho->size()) != d)
    throw Error("symmetrize: rho must have one entry per color");
  const int n = X->face_count();
  const ColorSet all = ColorSet::all(d);

  EfronSteinDecomposition dec = decompose(f);
  SymmetrizedFunction out;
  out.X = X;
  out.table.resize(1 << d, n);
  for_each_subset(all, [&](ColorSet S) {
    double coeff = 1.0;
    if (rho)
      for (int i : S.members()) coeff *= (*rho)[i];
    const FaceFunction& comp = dec.component(S);
    auto rows = X->projection_rows(all, S);
    for (int j = 0; j < n; ++j)
      out.table(S.bits(), j) = coeff * comp[(*rows)[j]];
  });
  parallel_for(n, [&](int j) {
    walsh_hadamard({out.table.col(j).data(), static_cast<size_t>(1u << d)});
  });
  return out;
}

}  // namespace

double SymmetrizedFunction::norm(double q) const {
  const int masks = static_cast<int>(table.rows());
  double acc = 0.0;
  for (int j = 0; j < table.cols(); ++j) {
    const double w = X->face_weight(j) / masks;
    for (int m = 0; m < masks; ++m)
      acc += w * std::pow(std::fabs(table(m, j)), q);
  }
  return std::pow(acc, 1.0 / q);
}

Eigen::VectorXd SymmetrizedFunction::coefficient(ColorSet S) const {
  const int masks = static_cast<int>(table.rows());
  Eigen::VectorXd out(table.cols());
  for (int j = 0; j < table.cols(); ++j) {
    double acc = 0.0;
    for (int m = 0; m < masks; ++m) {
      const int par = std::popcount(S.bits() & static_cast<uint32_t>(m));
      acc += parity_sign(par) * table(m, j);
    }
    out[j] = acc / masks;
  }
  return out;
}

FaceFunction SymmetrizedFunction::at_all_ones() const {
  std::vector<double> v(table.cols());
  for (int j = 0; j < table.cols(); ++j) v[j] = table(0, j);
  return FaceFunction::on(X, ColorSet::all(dimension()), std::move(v));
}

SymmetrizedFunction symmetrize(const FaceFunction& f) {
  return build_table(f, nullptr);
}

SymmetrizedFunction symmetrize_noised(const FaceFunction& f,
                                      const std::vector<double>& rho) {
  return build_table(f, &rho);
}

double sym_noise_norm(const FaceFunction& f, const std::vector<double>& rho,
                      double q) {
  return symmetrize_noised(f, rho).norm(q);
}

double sym_noise_norm(const FaceFunction& f, double rho, double q) {
  if (!f.complex()) throw Error("sym_noise_norm: empty function");
  return sym_noise_norm(
      f, std::vector<double>(f.complex()->dimension(), rho), q);
}

SandwichCheck sandwich_check(const FaceFunction& f,
                             const SandwichParams& params) {
  require_top(f, "sandwich_check");
  const double q = params.q;
  if (q <= 1.0) throw Error("sandwich_check: q must exceed 1");
  double cq;
  if (params.c_q) {
    cq = *params.c_q;
    if (cq <= 0.0 || cq > 1.0)
      throw Error("sandwich_check: c_q must lie in (0, 1]");
  } else if (std::fabs(q - 4.0) <= 1e-12 || std::fabs(q - 4.0 / 3.0) <= 1e-12) {
    cq = 0.4;
  } else {
    throw Error("sandwich_check: c_q required for q outside {4, 4/3}");
  }

  SandwichCheck out;
  out.q = q;
  out.c_q = cq;
  out.f_norm = f.norm(q);
  out.lower_norm = sym_noise_norm(f, cq, q);
  out.upper_norm = sym_noise_norm(f, 2.0, q);
  out.lower_factor = out.f_norm > 0 ? out.lower_norm / out.f_norm : 1.0;
  out.upper_factor = out.upper_norm > 0 ? out.f_norm / out.upper_norm : 1.0;
  out.pass_lower =
      out.lower_norm <= out.f_norm + 1e-9 * err_scale(out.lower_norm, out.f_norm);
  out.pass_upper =
      out.f_norm <= out.upper_norm + 1e-9 * err_scale(out.f_norm, out.upper_norm);
  return out;
}

DecorrelationCheck decorrelation_check(const FaceFunction& f,
                                       const std::vector<double>& r,
                                       const std::vector<int>& pi, double q) {
  require_top(f, "decorrelation_check");
  const ComplexPtr& X = f.complex();
  const int d = X->dimension();
  if (static_cast<int>(r.size()) != d)
    throw Error("decorrelation_check: r must have one entry per color");
  {
    std::vector<int> sorted = pi;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < d; ++i)
      if (static_cast<int>(sorted.size()) != d || sorted[i] != i)
        throw Error("decorrelation_check: pi must permute the colors");
  }

  FaceFunction joint = noise_operator(X, r).apply(f);
  FaceFunction chain = f;
  for (int k = d - 1; k >= 0; --k)
    chain = coord_noise(X, ColorSet::single(pi[k]), r).apply(chain);
  DecorrelationCheck out;
  out.measured = (joint - chain).norm(q);

  double sum = 0.0;
  for_each_subset(ColorSet::all(d), [&](ColorSet S) {
    double term = 1.0;
    for (int i = 0; i < d; ++i) term *= S.contains(i) ? r[i] : 1.0 - r[i];
    sum += std::fabs(term);
  });
  out.c_dr = static_cast<double>(d) * d * d * sum;
  out.gamma = d >= 2 ? gamma_certificate(X).gamma : 0.0;
  out.gamma_q = gamma_q_upper(std::clamp(out.gamma, 0.0, 1.0), q);
  out.bound = out.c_dr * out.gamma_q * f.norm(q);
  out.pass = out.measured <= out.bound + 1e-9;
  return out;
}

double localization_check(const FaceFunction& f, ColorSet S,
                          const std::vector<double>& r) {
  require_top(f, "localization_check");
  const ComplexPtr& X = f.complex();
  const int d = X->dimension();
  X->check_colors(S, "localization_check");
  if (static_cast<int>(r.size()) != d)
    throw Error("localization_check: r must have one entry per color");

  FaceFunction global = coord_noise(X, S, r).apply(f);
  if (S.empty()) {
    double worst = 0.0;
    for (int i = 0; i < X->face_count(); ++i)
      worst = std::max(worst, std::fabs(global[i] - f[i]));
    return worst;
  }

  const ColorSet rest = S.complement(d);
  // Link colors are the members of S renumbered in order; carry the rates.
  std::vector<double> r_link(S.size());
  {
    int k = 0;
    for (int i : S.members()) r_link[k++] = r[i];
  }
  const ColorSet link_all = ColorSet::all(S.size());

  const MarginalTable& trest = X->marginal_table(rest);
  double worst = 0.0;
  for (int row = 0; row < trest.rows(); ++row) {
    auto vals = trest.row(row);
    SubAssignment xs{rest, {vals.begin(), vals.end()}};
    ComplexPtr L = X->link(xs);
    FaceFunction local = coord_noise(L, link_all, r_link)
                             .apply(restrict_function(f, xs, L));
    // Compare on every top face sitting over this conditioning.
    for (int i = 0; i < X->face_count(); ++i) {
      if (trest.face_row[i] != row) continue;
      auto face = X->face(i);
      std::vector<int32_t> key;
      key.reserve(S.size());
      for (int c : S.members()) key.push_back(face[c]);
      const int li = L->find_face(key);
      if (li < 0) throw Error("localization_check: face missing from link");
      worst = std::max(worst, std::fabs(global[i] - local[li]));
    }
  }
  return worst;
}

double ScalarDist::moment(double a, double t, double q) const {
  double acc = 0.0;
  for (size_t k = 0; k < values.size(); ++k)
    acc += probs[k] * std::pow(std::fabs(a + t * values[k]), q);
  return std::pow(acc, 1.0 / q);
}

namespace {

void validate_dist(const ScalarDist& dist, const char* what) {
  if (dist.values.empty() || dist.values.size() != dist.probs.size())
    throw Error(std::string(what) + ": malformed distribution");
  double mass = 0.0, mean = 0.0;
  for (size_t k = 0; k < dist.values.size(); ++k) {
    if (dist.probs[k] < 0.0)
      throw Error(std::string(what) + ": negative probability");
    mass += dist.probs[k];
    mean += dist.probs[k] * dist.values[k];
  }
  if (std::fabs(mass - 1.0) > 1e-12)
    throw Error(std::string(what) + ": probabilities must sum to 1");
  if (std::fabs(mean) > 1e-12)
    throw Error(std::string(what) + ": distribution must have mean 0");
}

}  // namespace

ScalarSymCheck scalar_symmetrization_check(double a, const ScalarDist& dist,
                                           double q) {
  if (q <= 1.0) throw Error("scalar_symmetrization_check: q must exceed 1");
  validate_dist(dist, "scalar_symmetrization_check");

  ScalarSymCheck out;
  out.q = q;
  out.half_lhs = dist.moment(a, 0.5, q);
  // ||a + rX||_q over the product of dist and a uniform sign.
  out.half_rhs = std::pow(0.5 * std::pow(dist.moment(a, 1.0, q), q) +
                              0.5 * std::pow(dist.moment(a, -1.0, q), q),
                          1.0 / q);
  out.pass_half =
      out.half_lhs <= out.half_rhs + 1e-12 * err_scale(out.half_lhs, out.half_rhs);
  if (std::fabs(q - 4.0) <= 1e-12) {
    out.lower_lhs = dist.moment(a, -0.4, 4.0);
    out.lower_rhs = dist.moment(a, 1.0, 4.0);
    out.pass_lower = out.lower_lhs <=
                     out.lower_rhs + 1e-12 * err_scale(out.lower_lhs, out.lower_rhs);
  }
  return out;
}

double heuristic_c_q(double q, int probes, uint64_t seed) {
  if (q <= 1.0) throw Error("heuristic_c_q: q must exceed 1");
  if (q < 2.0) return heuristic_c_q(q / (q - 1.0), probes, seed);
  if (probes < 1) throw Error("heuristic_c_q: need at least one probe");

  struct Probe {
    double a;
    ScalarDist dist;
  };
  std::vector<Probe> family;
  family.push_back({1.0, {{1.0, -1.0}, {0.5, 0.5}}});
  family.push_back({1.0, {{2.0, -1.0}, {1.0 / 3.0, 2.0 / 3.0}}});
  Rng rng(mix_seed(seed, 0x5cd));
  for (int p = 0; p < probes; ++p) {
    const int support = rng.uniform_int(2, 5);
    ScalarDist d;
    double mass = 0.0;
    for (int k = 0; k < support; ++k) {
      d.values.push_back(rng.uniform(-2.0, 2.0));
      d.probs.push_back(rng.uniform(0.1, 1.0));
      mass += d.probs.back();
    }
    double mean = 0.0;
    for (int k = 0; k < support; ++k) {
      d.probs[k] /= mass;
      mean += d.probs[k] * d.values[k];
    }
    for (double& v : d.values) v -= mean;
    family.push_back({rng.uniform(-2.0, 2.0), std::move(d)});
  }

  auto holds = [&](double c) {
    for (const Probe& p : family) {
      const double lhs = p.dist.moment(p.a, -c, q);
      const double rhs = p.dist.moment(p.a, 1.0, q);
      if (lhs > rhs + 1e-12 * err_scale(lhs, rhs)) return false;
    }
    return true;
  };
  if (holds(1.0)) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace hdx
