#include "hdx/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hdx/builtins.hpp"
#include "hdx/efron_stein.hpp"
#include "hdx/expansion.hpp"
#include "hdx/hypercontractivity.hpp"
#include "hdx/io.hpp"
#include "hdx/operators.hpp"
#include "hdx/oracle.hpp"
#include "hdx/parallel.hpp"
#include "hdx/rng.hpp"
#include "hdx/symmetrization.hpp"
#include "hdx/util.hpp"

namespace hdx {
namespace {

struct Ctx {
  uint64_t seed = 0;
  double tol = 1e-9;
};

using CheckFn = std::function<void(const Ctx&, CheckRecord&)>;

struct CheckDef {
  const char* name;
  const char* ref;
  CheckFn fn;
};

double scaled_diff(double a, double b) {
  return std::fabs(a - b) / err_scale(a, b);
}

double sup_diff(const FaceFunction& a, const FaceFunction& b) {
  return (a - b).sup_abs();
}

// err is an already-scaled worst discrepancy; the allowance is the record's rhs.
void finish_exact(CheckRecord& rec, double err, double allowance) {
  rec.lhs = err;
  rec.rhs = allowance;
  rec.status = err <= allowance ? CheckStatus::Pass : CheckStatus::Fail;
}

// lhs <= rhs with mixed relative/absolute tolerance.
void finish_bound(CheckRecord& rec, double lhs, double rhs, double tol) {
  rec.lhs = lhs;
  rec.rhs = rhs;
  rec.status = lhs <= rhs + tol * err_scale(lhs, rhs) ? CheckStatus::Pass
                                                      : CheckStatus::Fail;
}

FaceFunction gauss_fn(const ComplexPtr& X, uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(X->face_count());
  for (double& x : v) x = rng.normal();
  return FaceFunction::on(X, ColorSet::all(X->dimension()), std::move(v));
}

FaceFunction pm1_fn(const ComplexPtr& X, uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(X->face_count());
  for (double& x : v) x = rng.pm1();
  return FaceFunction::on(X, ColorSet::all(X->dimension()), std::move(v));
}

ComplexPtr sparse_instance(uint64_t seed, int max_d = 4, int max_k = 3) {
  Rng rng(seed);
  const int d = rng.uniform_int(2, max_d);
  std::vector<int> sizes(d);
  int prod = 1;
  for (int& k : sizes) {
    k = rng.uniform_int(2, max_k);
    prod *= k;
  }
  const int target = std::max(d + 2, (2 * prod) / 3);
  return gen_random_sparse(sizes, target, mix_seed(seed, 0x5eed));
}

ComplexPtr product_instance(uint64_t seed, int max_d = 4, int max_k = 3) {
  Rng rng(seed);
  const int d = rng.uniform_int(2, max_d);
  std::vector<int> sizes(d);
  for (int& k : sizes) k = rng.uniform_int(2, max_k);
  return gen_random_product(sizes, mix_seed(seed, 0xfeed));
}

ComplexPtr nearproduct_instance(uint64_t seed, int d, double eps) {
  std::vector<int> sizes(d, 2);
  ComplexPtr base = gen_random_product(sizes, mix_seed(seed, 0xabcd));
  return perturb(*base, eps, mix_seed(seed, 0xcafe));
}

std::vector<double> random_r(Rng& rng, int d, double lo = -1.0,
                             double hi = 2.0) {
  std::vector<double> r(d);
  for (double& x : r) x = rng.uniform(lo, hi);
  return r;
}

std::string params_str(std::initializer_list<std::pair<const char*, std::string>> kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    if (!out.empty()) out += " ";
    out += k;
    out += "=";
    out += v;
  }
  return out;
}

// ---- core ------------------------------------------------------------------

void check_marginal_consistency(const Ctx& ctx, CheckRecord& rec) {
  double err = 0.0;
  const int instances = 4;
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = sparse_instance(mix_seed(ctx.seed, t));
    if (t == 0) rec.complex_id = X->id();
    const int d = X->dimension();
    for (uint32_t bits = 1; bits < (1u << d); ++bits) {
      const MarginalTable& tb = X->marginal_table(ColorSet(bits));
      std::vector<double> acc(tb.weight.size(), 0.0);
      for (int i = 0; i < X->face_count(); ++i)
        acc[tb.face_row[i]] += X->face_weight(i);
      double total = 0.0;
      for (size_t r = 0; r < acc.size(); ++r) {
        err = std::max(err, std::fabs(acc[r] - tb.weight[r]));
        total += tb.weight[r];
      }
      err = std::max(err, std::fabs(total - 1.0));
    }
  }
  finish_exact(rec, err, ctx.tol);
  rec.params = params_str({{"instances", std::to_string(instances)}});
}

void check_link_normalization(const Ctx& ctx, CheckRecord& rec) {
  double err = 0.0;
  const int instances = 3;
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = sparse_instance(mix_seed(ctx.seed, t));
    if (t == 0) rec.complex_id = X->id();
    const int d = X->dimension();
    for (int c = 0; c < d; ++c) {
      const ColorSet S = ColorSet::single(c);
      const MarginalTable& tb = X->marginal_table(S);
      for (int r = 0; r < tb.rows(); ++r) {
        SubAssignment xs{S, {tb.row(r)[0]}};
        ComplexPtr L = X->link(xs);
        double mass = 0.0;
        for (int i = 0; i < L->face_count(); ++i) mass += L->face_weight(i);
        err = std::max(err, std::fabs(mass - 1.0));
        // Conditional weights against Bayes by brute force.
        for (int i = 0; i < L->face_count(); ++i) {
          auto lf = L->face(i);
          std::vector<int32_t> full =
              merge_assignment(d, xs, {lf.data(), lf.size()});
          const int fi = X->find_face(full);
          const double direct =
              fi < 0 ? 0.0 : X->face_weight(fi) / tb.weight[r];
          err = std::max(err, std::fabs(L->face_weight(i) - direct));
        }
      }
    }
  }
  finish_exact(rec, err, ctx.tol);
  rec.params = params_str({{"instances", std::to_string(instances)}});
}

// ---- Efron-Stein on arbitrary complexes -------------------------------------

void check_decomposition_sum(const Ctx& ctx, CheckRecord& rec) {
  double err = 0.0;
  const int instances = 4;
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = t % 2 ? product_instance(mix_seed(ctx.seed, t))
                         : sparse_instance(mix_seed(ctx.seed, t));
    if (t == 0) rec.complex_id = X->id();
    FaceFunction f = gauss_fn(X, mix_seed(ctx.seed, 100 + t));
    EfronSteinDecomposition dec = decompose(f);
    FaceFunction sum = FaceFunction::constant(
        X, ColorSet::all(X->dimension()), 0.0);
    for (uint32_t bits = 0; bits < (1u << X->dimension()); ++bits)
      sum += dec.lifted(ColorSet(bits));
    err = std::max(err, sup_diff(sum, f));
  }
  finish_exact(rec, err, ctx.tol);
  rec.params = params_str({{"instances", std::to_string(instances)}});
}

void check_inclusion_exclusion(const Ctx& ctx, CheckRecord& rec) {
  double err = 0.0;
  const int instances = 3;
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = sparse_instance(mix_seed(ctx.seed, t));
    if (t == 0) rec.complex_id = X->id();
    FaceFunction f = gauss_fn(X, mix_seed(ctx.seed, 100 + t));
    EfronSteinDecomposition dec = decompose(f);
    const int d = X->dimension();
    for (uint32_t s = 0; s < (1u << d); ++s) {
      const ColorSet S(s);
      FaceFunction es = averaging(X, ColorSet::all(d), S).apply(f);
      FaceFunction sum = FaceFunction::constant(X, S, 0.0);
      for (uint32_t tt = s;; tt = (tt - 1) & s) {
        sum += dec.component(ColorSet(tt)).lift_to(S);
        if (tt == 0) break;
      }
      err = std::max(err, sup_diff(es, sum));
    }
  }
  finish_exact(rec, err, ctx.tol);
  rec.params = params_str({{"instances", std::to_string(instances)}});
}

void check_noise_forms(const Ctx& ctx, CheckRecord& rec) {
  double err = 0.0;
  const int instances = 4;
  Rng rng(mix_seed(ctx.seed, 0x77));
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = t % 2 ? product_instance(mix_seed(ctx.seed, t))
                         : sparse_instance(mix_seed(ctx.seed, t));
    if (t == 0) rec.complex_id = X->id();
    FaceFunction f = gauss_fn(X, mix_seed(ctx.seed, 100 + t));
    const std::vector<double> r = random_r(rng, X->dimension());
    FaceFunction via_es = es_noise_apply(decompose(f), r);
    FaceFunction via_op = noise_operator(X, r).apply(f);
    err = std::max(err, sup_diff(via_es, via_op));
  }
  finish_exact(rec, err, ctx.tol);
  rec.params = params_str({{"instances", std::to_string(instances)},
                           {"r_range", "[-1,2]"}});
}

void check_localization(const Ctx& ctx, CheckRecord& rec) {
  double err = 0.0;
  const int instances = 3;
  Rng rng(mix_seed(ctx.seed, 0x78));
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = sparse_instance(mix_seed(ctx.seed, t), 4, 3);
    if (t == 0) rec.complex_id = X->id();
    FaceFunction f = gauss_fn(X, mix_seed(ctx.seed, 100 + t));
    const int d = X->dimension();
    const std::vector<double> r = random_r(rng, d);
    for (int c = 0; c < d; ++c)
      err = std::max(err, localization_check(f, ColorSet::single(c), r));
    if (d >= 3)
      err = std::max(err, localization_check(f, ColorSet::of({0, d - 1}), r));
  }
  finish_exact(rec, err, ctx.tol);
  rec.params = params_str({{"instances", std::to_string(instances)}});
}

void check_restriction_identity(const Ctx& ctx, CheckRecord& rec) {
  double err = 0.0;
  const int instances = 3;
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = sparse_instance(mix_seed(ctx.seed, t), 4, 3);
    if (t == 0) rec.complex_id = X->id();
    FaceFunction f = gauss_fn(X, mix_seed(ctx.seed, 100 + t));
    const int d = X->dimension();
    err = std::max(err, restriction_identity_check(f, ColorSet::single(0),
                                                   ColorSet::single(d - 1)));
    if (d >= 3)
      err = std::max(err,
                     restriction_identity_check(f, ColorSet::of({0, 1}),
                                                ColorSet::single(d - 1)));
  }
  finish_exact(rec, err, ctx.tol);
  rec.params = params_str({{"instances", std::to_string(instances)}});
}

void check_total_influence(const Ctx& ctx, CheckRecord& rec) {
  double err = 0.0;
  const int instances = 4;
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = t % 2 ? product_instance(mix_seed(ctx.seed, t))
                         : sparse_instance(mix_seed(ctx.seed, t));
    if (t == 0) rec.complex_id = X->id();
    FaceFunction f = gauss_fn(X, mix_seed(ctx.seed, 100 + t));
    TotalInfluence ti = total_influence(f);
    err = std::max(err, scaled_diff(ti.via_laplacians, ti.via_levels));
  }
  finish_exact(rec, err, ctx.tol);
  rec.params = params_str({{"instances", std::to_string(instances)}});
}

void check_contraction(const Ctx& ctx, CheckRecord& rec) {
  double worst_lhs = 0.0, worst_rhs = 1.0, worst_margin = -1.0;
  const int instances = 3;
  const double qs[] = {1.5, 2.0, 3.0};
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = sparse_instance(mix_seed(ctx.seed, t));
    if (t == 0) rec.complex_id = X->id();
    FaceFunction f = gauss_fn(X, mix_seed(ctx.seed, 100 + t));
    EfronSteinDecomposition dec = decompose(f);
    const int d = X->dimension();
    for (double q : qs) {
      const double fq = f.norm(q);
      for (uint32_t s = 1; s < (1u << d); ++s) {
        const ColorSet S(s);
        const double lhs = dec.component(S).norm(q);
        const double rhs = std::pow(2.0, S.size()) * fq;
        const double margin =
            (lhs - rhs) / err_scale(lhs, rhs);
        if (margin > worst_margin) {
          worst_margin = margin;
          worst_lhs = lhs;
          worst_rhs = rhs;
        }
      }
    }
  }
  finish_bound(rec, worst_lhs, worst_rhs, ctx.tol);
  rec.params = params_str({{"instances", std::to_string(instances)},
                           {"q", "1.5,2,3"}});
}

// ---- product-measure phenomena ----------------------------------------------

void check_orthogonality(const Ctx& ctx, CheckRecord& rec) {
  double err = 0.0;
  const int instances = 4;
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = product_instance(mix_seed(ctx.seed, t));
    if (t == 0) rec.complex_id = X->id();
    FaceFunction f = gauss_fn(X, mix_seed(ctx.seed, 100 + t));
    EfronSteinDecomposition dec = decompose(f);
    const int d = X->dimension();
    for (uint32_t a = 0; a < (1u << d); ++a)
      for (uint32_t b = a + 1; b < (1u << d); ++b) {
        const double ip =
            dec.lifted(ColorSet(a)).inner(dec.lifted(ColorSet(b)));
        err = std::max(err, std::fabs(ip));
      }
  }
  finish_exact(rec, err, ctx.tol);
  rec.params = params_str({{"instances", std::to_string(instances)}});
}

void check_parseval(const Ctx& ctx, CheckRecord& rec) {
  double err = 0.0;
  const int instances = 4;
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = product_instance(mix_seed(ctx.seed, t));
    if (t == 0) rec.complex_id = X->id();
    FaceFunction f = gauss_fn(X, mix_seed(ctx.seed, 100 + t));
    EfronSteinDecomposition dec = decompose(f);
    double sum = 0.0;
    for (uint32_t s = 0; s < (1u << X->dimension()); ++s)
      sum += dec.component(ColorSet(s)).norm2_sq();
    err = std::max(err, scaled_diff(sum, f.norm2_sq()));
  }
  finish_exact(rec, err, ctx.tol);
  rec.params = params_str({{"instances", std::to_string(instances)}});
}

void check_projection_semigroup(const Ctx& ctx, CheckRecord& rec) {
  double err = 0.0;
  const int instances = 3;
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = product_instance(mix_seed(ctx.seed, t), 3, 3);
    if (t == 0) rec.complex_id = X->id();
    FaceFunction f = gauss_fn(X, mix_seed(ctx.seed, 100 + t));
    const int d = X->dimension();
    const ColorSet top = ColorSet::all(d);
    auto lifted_E = [&](ColorSet T) {
      return compose(lift(X, T, top), projection_E(X, T));
    };
    for (uint32_t a = 0; a < (1u << d); ++a)
      for (uint32_t b = 0; b < (1u << d); ++b) {
        const ColorSet A(a), B(b);
        FaceFunction lhs = lifted_E(A).apply(lifted_E(B).apply(f));
        FaceFunction rhs = lifted_E(A & B).apply(f);
        err = std::max(err, sup_diff(lhs, rhs));
      }
  }
  finish_exact(rec, err, ctx.tol);
  rec.params = params_str({{"instances", std::to_string(instances)}});
}

void check_swap_equals_stationary(const Ctx& ctx, CheckRecord& rec) {
  double err = 0.0;
  const int instances = 4;
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = product_instance(mix_seed(ctx.seed, t), 4, 3);
    if (t == 0) rec.complex_id = X->id();
    const int d = X->dimension();
    std::vector<std::pair<ColorSet, ColorSet>> pairs = {
        {ColorSet::single(0), ColorSet::single(d - 1)}};
    if (d >= 4)
      pairs.push_back({ColorSet::of({0, 1}), ColorSet::of({d - 2, d - 1})});
    for (auto [S, T] : pairs) {
      const MarginalTable& tb = X->marginal_table(S);
      Rng rng(mix_seed(ctx.seed, 200 + t));
      std::vector<double> v(tb.rows());
      for (double& x : v) x = rng.normal();
      FaceFunction g = FaceFunction::on(X, S, std::move(v));
      err = std::max(err, sup_diff(swap_walk(X, S, T).apply(g),
                                   stationary(X, S, T).apply(g)));
    }
  }
  finish_exact(rec, err, ctx.tol);
  rec.params = params_str({{"instances", std::to_string(instances)}});
}

void check_decorrelation_exact(const Ctx& ctx, CheckRecord& rec) {
  double err = 0.0;
  const int instances = 2;
  Rng rng(mix_seed(ctx.seed, 0x79));
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = product_instance(mix_seed(ctx.seed, t), 3, 3);
    if (t == 0) rec.complex_id = X->id();
    FaceFunction f = gauss_fn(X, mix_seed(ctx.seed, 100 + t));
    const int d = X->dimension();
    const std::vector<double> r = random_r(rng, d, -0.5, 1.5);
    std::vector<int> fwd(d), rev(d);
    for (int i = 0; i < d; ++i) {
      fwd[i] = i;
      rev[i] = d - 1 - i;
    }
    err = std::max(err, decorrelation_check(f, r, fwd, 2.0).measured);
    err = std::max(err, decorrelation_check(f, r, rev, 3.0).measured);
  }
  finish_exact(rec, err, ctx.tol);
  rec.params = params_str({{"instances", std::to_string(instances)},
                           {"q", "2,3"}});
}

// ---- symmetrization ----------------------------------------------------------

void check_sandwich_product(const Ctx& ctx, CheckRecord& rec) {
  double worst = -1.0;
  const int instances = 3;
  bool all_pass = true;
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = product_instance(mix_seed(ctx.seed, t), 3, 3);
    if (t == 0) rec.complex_id = X->id();
    FaceFunction f = gauss_fn(X, mix_seed(ctx.seed, 100 + t));
    for (double q : {4.0, 4.0 / 3.0}) {
      SandwichParams params;
      params.q = q;
      SandwichCheck c = sandwich_check(f, params);
      all_pass = all_pass && c.pass_lower && c.pass_upper;
      worst = std::max(worst, c.lower_norm - c.f_norm);
      worst = std::max(worst, c.f_norm - c.upper_norm);
    }
  }
  rec.lhs = worst;
  rec.rhs = 0.0;
  rec.status = all_pass ? CheckStatus::Pass : CheckStatus::Fail;
  rec.params = params_str({{"instances", std::to_string(instances)},
                           {"q", "4,4/3"},
                           {"c_q", "2/5"}});
}

ScalarDist seeded_dist(Rng& rng, int points) {
  ScalarDist dist;
  dist.values.resize(points);
  dist.probs.resize(points);
  double mass = 0.0;
  for (int i = 0; i < points; ++i) {
    dist.values[i] = rng.normal();
    dist.probs[i] = rng.uniform(0.1, 1.0);
    mass += dist.probs[i];
  }
  double mean = 0.0;
  for (int i = 0; i < points; ++i) {
    dist.probs[i] /= mass;
    mean += dist.probs[i] * dist.values[i];
  }
  for (double& v : dist.values) v -= mean;
  return dist;
}

void check_scalar_half(const Ctx& ctx, CheckRecord& rec) {
  double worst = -1.0;
  bool all_pass = true;
  const int trials = 40;
  Rng rng(mix_seed(ctx.seed, 0x7a));
  for (int t = 0; t < trials; ++t) {
    ScalarDist dist = seeded_dist(rng, rng.uniform_int(2, 5));
    const double a = rng.uniform(-2.0, 2.0);
    const double q = (t % 3 == 0) ? 4.0 : (t % 3 == 1 ? 4.0 / 3.0 : 2.5);
    ScalarSymCheck c = scalar_symmetrization_check(a, dist, q);
    all_pass = all_pass && c.pass_half;
    worst = std::max(worst, c.half_lhs - c.half_rhs);
  }
  rec.lhs = worst;
  rec.rhs = 0.0;
  rec.status = all_pass ? CheckStatus::Pass : CheckStatus::Fail;
  rec.params = params_str({{"trials", std::to_string(trials)},
                           {"q", "4,4/3,2.5"}});
}

void check_scalar_lower_q4(const Ctx& ctx, CheckRecord& rec) {
  double worst = -1.0;
  bool all_pass = true;
  const int trials = 40;
  Rng rng(mix_seed(ctx.seed, 0x7b));
  for (int t = 0; t < trials; ++t) {
    ScalarDist dist = seeded_dist(rng, rng.uniform_int(2, 5));
    const double a = rng.uniform(-2.0, 2.0);
    ScalarSymCheck c = scalar_symmetrization_check(a, dist, 4.0);
    all_pass = all_pass && c.pass_lower;
    worst = std::max(worst, c.lower_lhs - c.lower_rhs);
  }
  rec.lhs = worst;
  rec.rhs = 0.0;
  rec.status = all_pass ? CheckStatus::Pass : CheckStatus::Fail;
  rec.params = params_str({{"trials", std::to_string(trials)}, {"c", "2/5"}});
}

void check_coefficient_recovery(const Ctx& ctx, CheckRecord& rec) {
  double err = 0.0;
  const int instances = 3;
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = sparse_instance(mix_seed(ctx.seed, t), 3, 3);
    if (t == 0) rec.complex_id = X->id();
    FaceFunction f = gauss_fn(X, mix_seed(ctx.seed, 100 + t));
    EfronSteinDecomposition dec = decompose(f);
    SymmetrizedFunction sym = symmetrize(f);
    err = std::max(err, sup_diff(sym.at_all_ones(), f));
    const int d = X->dimension();
    for (uint32_t s = 0; s < (1u << d); ++s) {
      const ColorSet S(s);
      const Eigen::VectorXd coeff = sym.coefficient(S);
      const FaceFunction lifted = dec.lifted(S);
      for (int i = 0; i < X->face_count(); ++i)
        err = std::max(err, std::fabs(coeff[i] - lifted[i]));
    }
    err = std::max(err, scaled_diff(sym_noise_norm(f, 1.0, 3.0),
                                    sym.norm(3.0)));
  }
  finish_exact(rec, err, ctx.tol);
  rec.params = params_str({{"instances", std::to_string(instances)}});
}

void check_decorrelation_bound(const Ctx& ctx, CheckRecord& rec) {
  double worst_lhs = 0.0, worst_rhs = 0.0, worst_margin = -1e300;
  const int instances = 2;
  Rng rng(mix_seed(ctx.seed, 0x7c));
  bool all_pass = true;
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = nearproduct_instance(mix_seed(ctx.seed, t), 3, 0.05);
    if (t == 0) rec.complex_id = X->id();
    FaceFunction f = gauss_fn(X, mix_seed(ctx.seed, 100 + t));
    const int d = X->dimension();
    const std::vector<double> r = random_r(rng, d, 0.0, 1.0);
    std::vector<int> pi(d);
    for (int i = 0; i < d; ++i) pi[i] = i;
    DecorrelationCheck c = decorrelation_check(f, r, pi, 2.0);
    all_pass = all_pass && c.pass;
    const double margin = (c.measured - c.bound) / err_scale(c.measured, c.bound);
    if (margin > worst_margin) {
      worst_margin = margin;
      worst_lhs = c.measured;
      worst_rhs = c.bound;
    }
  }
  rec.lhs = worst_lhs;
  rec.rhs = worst_rhs;
  rec.status = all_pass ? CheckStatus::Pass : CheckStatus::Fail;
  rec.params = params_str({{"instances", std::to_string(instances)},
                           {"eps", "0.05"},
                           {"q", "2"}});
}

void check_permutation_robustness(const Ctx& ctx, CheckRecord& rec) {
  double worst_lhs = 0.0, worst_rhs = 0.0;
  bool all_pass = true;
  const int instances = 2;
  Rng rng(mix_seed(ctx.seed, 0x7d));
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = nearproduct_instance(mix_seed(ctx.seed, t), 3, 0.05);
    if (t == 0) rec.complex_id = X->id();
    FaceFunction f = gauss_fn(X, mix_seed(ctx.seed, 100 + t));
    const int d = X->dimension();
    const std::vector<double> r = random_r(rng, d, 0.0, 1.0);
    std::vector<int> fwd(d), rev(d);
    for (int i = 0; i < d; ++i) {
      fwd[i] = i;
      rev[i] = d - 1 - i;
    }
    auto chain = [&](const std::vector<int>& pi) {
      Operator op = coord_noise(X, ColorSet::single(pi.back()), r);
      for (int i = static_cast<int>(pi.size()) - 2; i >= 0; --i)
        op = compose(coord_noise(X, ColorSet::single(pi[i]), r), op);
      return op;
    };
    const double measured =
        (chain(fwd).apply(f) - chain(rev).apply(f)).norm(2.0);
    DecorrelationCheck c = decorrelation_check(f, r, fwd, 2.0);
    const double bound = 2.0 * c.bound;
    if (measured - bound > worst_lhs - worst_rhs) {
      worst_lhs = measured;
      worst_rhs = bound;
    }
    all_pass =
        all_pass && measured <= bound + ctx.tol * err_scale(measured, bound);
  }
  rec.lhs = worst_lhs;
  rec.rhs = worst_rhs;
  rec.status = all_pass ? CheckStatus::Pass : CheckStatus::Fail;
  rec.params = params_str({{"instances", std::to_string(instances)},
                           {"orders", "forward,reverse"}});
}

// ---- expansion ----------------------------------------------------------------

Operator centered_swap(const ComplexPtr& X, ColorSet S, ColorSet T) {
  return swap_walk(X, S, T) - stationary(X, S, T);
}

void check_ascent_vs_svd(const Ctx& ctx, CheckRecord& rec) {
  double err = 0.0;
  const int walks = 6;
  for (int t = 0; t < walks; ++t) {
    Rng rng(mix_seed(ctx.seed, t));
    std::vector<int> sizes = {rng.uniform_int(2, 5), rng.uniform_int(2, 5)};
    const int target = sizes[0] * sizes[1] - rng.uniform_int(0, 2);
    ComplexPtr X =
        gen_random_sparse(sizes, target, mix_seed(ctx.seed, 50 + t));
    if (t == 0) rec.complex_id = X->id();
    Operator op = centered_swap(X, ColorSet::single(0), ColorSet::single(1));
    AscentOptions opts;
    opts.seed = mix_seed(ctx.seed, 90 + t);
    NormEstimate est = opnorm_q_lower(op, 2.0, opts);
    err = std::max(err, scaled_diff(est.lower, opnorm_2_svd(op)));
  }
  finish_exact(rec, err, std::max(ctx.tol, 1e-6));
  rec.params = params_str({{"walks", std::to_string(walks)}, {"q", "2"}});
}

void check_riesz_thorin(const Ctx& ctx, CheckRecord& rec) {
  double worst_lhs = 0.0, worst_rhs = 0.0, worst_margin = -1e300;
  bool all_pass = true;
  const int walks = 4;
  for (int t = 0; t < walks; ++t) {
    Rng rng(mix_seed(ctx.seed, t));
    std::vector<int> sizes = {rng.uniform_int(2, 4), rng.uniform_int(2, 4)};
    ComplexPtr X = gen_random_sparse(sizes, sizes[0] * sizes[1],
                                     mix_seed(ctx.seed, 50 + t));
    if (t == 0) rec.complex_id = X->id();
    Operator op = centered_swap(X, ColorSet::single(0), ColorSet::single(1));
    for (double q : {4.0, 4.0 / 3.0}) {
      AscentOptions opts;
      opts.seed = mix_seed(ctx.seed, 90 + t);
      const double lower = opnorm_q_lower(op, q, opts).lower;
      const double upper = opnorm_q_interp_upper(op, q);
      all_pass =
          all_pass && lower <= upper + ctx.tol * err_scale(lower, upper);
      const double margin = (lower - upper) / err_scale(lower, upper);
      if (margin > worst_margin) {
        worst_margin = margin;
        worst_lhs = lower;
        worst_rhs = upper;
      }
    }
  }
  rec.lhs = worst_lhs;
  rec.rhs = worst_rhs;
  rec.status = all_pass ? CheckStatus::Pass : CheckStatus::Fail;
  rec.params = params_str({{"walks", std::to_string(walks)},
                           {"q", "4,4/3"}});
}

ComplexPtr two_point_chain(double a) {
  return build_explicit({{{0, 0}, (1.0 - a) / 2.0},
                         {{0, 1}, a / 2.0},
                         {{1, 0}, a / 2.0},
                         {{1, 1}, (1.0 - a) / 2.0}});
}

void check_two_point(const Ctx& ctx, CheckRecord& rec) {
  double err = 0.0;
  for (double a : {0.1, 0.25, 0.4}) {
    ComplexPtr X = two_point_chain(a);
    if (rec.complex_id.empty()) rec.complex_id = X->id();
    Operator op = centered_swap(X, ColorSet::single(0), ColorSet::single(1));
    const double target = std::fabs(1.0 - 2.0 * a);
    err = std::max(err, scaled_diff(opnorm_2_svd(op), target));
    for (double q : {4.0, 4.0 / 3.0}) {
      AscentOptions opts;
      opts.seed = mix_seed(ctx.seed, static_cast<uint64_t>(a * 1000));
      const double lower = opnorm_q_lower(op, q, opts).lower;
      const double upper = opnorm_q_interp_upper(op, q);
      err = std::max(err, std::max(lower - target, 0.0));
      err = std::max(err, std::max(target - upper, 0.0));
    }
  }
  finish_exact(rec, err, std::max(ctx.tol, 1e-7));
  rec.params = params_str({{"a", "0.1,0.25,0.4"}, {"q", "2,4,4/3"}});
}

void check_product_gamma(const Ctx& ctx, CheckRecord& rec) {
  double err = 0.0;
  const int instances = 2;
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = product_instance(mix_seed(ctx.seed, t), 3, 3);
    if (t == 0) rec.complex_id = X->id();
    CertificateOptions opts;
    opts.jobs = 1;
    ExpansionCertificate cert = gamma_certificate(X, opts);
    err = std::max(err, cert.gamma);
  }
  finish_exact(rec, err, std::max(ctx.tol, 1e-7));
  rec.params = params_str({{"instances", std::to_string(instances)}});
}

void check_swap_norm_bound(const Ctx& ctx, CheckRecord& rec) {
  double worst_lhs = 0.0, worst_rhs = 0.0, worst_margin = -1e300;
  bool all_pass = true;
  const int instances = 2;
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = nearproduct_instance(mix_seed(ctx.seed, t), 3, 0.04);
    if (t == 0) rec.complex_id = X->id();
    for (double q : {2.0, 4.0}) {
      AscentOptions opts;
      opts.seed = mix_seed(ctx.seed, 30 + t);
      SwapNormCheck c = swap_norm_check(X, ColorSet::single(0),
                                        ColorSet::single(1), q, opts);
      all_pass = all_pass && c.pass;
      const double margin =
          (c.measured - c.bound) / err_scale(c.measured, c.bound);
      if (margin > worst_margin) {
        worst_margin = margin;
        worst_lhs = c.measured;
        worst_rhs = c.bound;
      }
    }
  }
  rec.lhs = worst_lhs;
  rec.rhs = worst_rhs;
  rec.status = all_pass ? CheckStatus::Pass : CheckStatus::Fail;
  rec.params = params_str({{"instances", std::to_string(instances)},
                           {"eps", "0.04"},
                           {"q", "2,4"}});
}

// ---- hypercontractivity --------------------------------------------------------

void check_bonami_q4(const Ctx& ctx, CheckRecord& rec) {
  double worst_lhs = 0.0, worst_rhs = 0.0, worst_margin = -1e300;
  bool all_pass = true;
  const int instances = 3;
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = nearproduct_instance(mix_seed(ctx.seed, t), 3, 1e-3);
    if (t == 0) rec.complex_id = X->id();
    FaceFunction f = gauss_fn(X, mix_seed(ctx.seed, 100 + t));
    for (int i : {1, 2}) {
      BonamiCheck c = bonami_check(f, i, 4.0);
      all_pass = all_pass && c.pass;
      const double margin = (c.lhs - c.rhs) / err_scale(c.lhs, c.rhs);
      if (margin > worst_margin) {
        worst_margin = margin;
        worst_lhs = c.lhs;
        worst_rhs = c.rhs;
      }
    }
  }
  rec.lhs = worst_lhs;
  rec.rhs = worst_rhs;
  rec.status = all_pass ? CheckStatus::Pass : CheckStatus::Fail;
  rec.params = params_str({{"instances", std::to_string(instances)},
                           {"i", "1,2"},
                           {"q", "4"}});
}

void check_cube_sqrt3(const Ctx& ctx, CheckRecord& rec) {
  double worst_lhs = 0.0, worst_rhs = 0.0, worst_margin = -1e300;
  bool all_pass = true;
  const int instances = 4;
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = gen_uniform_cube(4 + (t % 2));
    if (t == 0) rec.complex_id = X->id();
    FaceFunction f = t < 2 ? pm1_fn(X, mix_seed(ctx.seed, 100 + t))
                           : gauss_fn(X, mix_seed(ctx.seed, 100 + t));
    EfronSteinDecomposition dec = decompose(f);
    for (int i = 1; i <= 2; ++i) {
      FaceFunction low = truncate(dec, i);
      const double lhs = low.norm(4.0);
      const double rhs = std::pow(std::sqrt(3.0), i) * low.norm(2.0);
      all_pass = all_pass && lhs <= rhs + ctx.tol * err_scale(lhs, rhs);
      const double margin = (lhs - rhs) / err_scale(lhs, rhs);
      if (margin > worst_margin) {
        worst_margin = margin;
        worst_lhs = lhs;
        worst_rhs = rhs;
      }
    }
  }
  rec.lhs = worst_lhs;
  rec.rhs = worst_rhs;
  rec.status = all_pass ? CheckStatus::Pass : CheckStatus::Fail;
  rec.params = params_str({{"instances", std::to_string(instances)},
                           {"d", "4,5"},
                           {"i", "1,2"}});
}

void check_level_i_hoelder(const Ctx& ctx, CheckRecord& rec) {
  double worst_lhs = 0.0, worst_rhs = 0.0, worst_margin = -1e300;
  bool all_pass = true;
  const int instances = 4;
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = t % 2 ? product_instance(mix_seed(ctx.seed, t))
                         : sparse_instance(mix_seed(ctx.seed, t));
    if (t == 0) rec.complex_id = X->id();
    FaceFunction f = gauss_fn(X, mix_seed(ctx.seed, 100 + t));
    EfronSteinDecomposition dec = decompose(f);
    for (int i = 1; i <= std::min(2, X->dimension()); ++i) {
      FaceFunction low = truncate(dec, i);
      const double lhs = f.inner(low);
      const double rhs = f.norm(4.0 / 3.0) * low.norm(4.0);
      all_pass = all_pass && lhs <= rhs + ctx.tol * err_scale(lhs, rhs);
      const double margin = (lhs - rhs) / err_scale(lhs, rhs);
      if (margin > worst_margin) {
        worst_margin = margin;
        worst_lhs = lhs;
        worst_rhs = rhs;
      }
    }
  }
  rec.lhs = worst_lhs;
  rec.rhs = worst_rhs;
  rec.status = all_pass ? CheckStatus::Pass : CheckStatus::Fail;
  rec.params = params_str({{"instances", std::to_string(instances)},
                           {"i", "1,2"}});
}

void check_two_vs_four_thirds(const Ctx& ctx, CheckRecord& rec) {
  double worst = -1e300;
  bool all_pass = true;
  const int instances = 3;
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = sparse_instance(mix_seed(ctx.seed, t), 3, 3);
    if (t == 0) rec.complex_id = X->id();
    FaceFunction f = gauss_fn(X, mix_seed(ctx.seed, 100 + t));
    TwoVsFourThirdsCheck c = two_vs_four_thirds_check(f);
    all_pass = all_pass && c.pass;
    worst = std::max(worst, c.worst_margin);
  }
  rec.lhs = worst;
  rec.rhs = 0.0;
  rec.status = all_pass ? CheckStatus::Pass : CheckStatus::Fail;
  rec.params = params_str({{"instances", std::to_string(instances)}});
}

void check_dictator_counterexample(const Ctx& ctx, CheckRecord& rec) {
  const double p = 0.25;
  ComplexPtr X = gen_biased_cube(2, p);
  rec.complex_id = X->id();
  FaceFunction f = builtin_function(X, "indicator", {0.0, 1.0});
  double err = 0.0;
  err = std::max(err, scaled_diff(std::pow(f.norm(4.0), 4.0), p));
  err = std::max(err, scaled_diff(f.norm2_sq(), p));
  GlobalnessProfile g = globalness(f);
  err = std::max(err, scaled_diff(g.minimal_r, 1.0 / p));
  // The 4-norm mass exceeds the globalness-free budget by exactly r.
  const double ratio =
      std::pow(f.norm(4.0), 4.0) / (f.norm2_sq() * f.norm2_sq());
  err = std::max(err, scaled_diff(ratio, g.minimal_r));
  finish_exact(rec, err, ctx.tol);
  rec.params = params_str({{"p", "0.25"}});
}

void check_booster_majority(const Ctx& ctx, CheckRecord& rec) {
  ComplexPtr X = gen_uniform_cube(3);
  rec.complex_id = X->id();
  FaceFunction f = builtin_function(X, "majority", {});
  BoosterSearchResult res = booster_search(f, 1, 0.4);
  double err = 0.0;
  err = std::max(err, std::fabs(static_cast<double>(res.boosters.size()) - 6.0));
  for (const BoosterRecord& b : res.boosters)
    err = std::max(err, std::fabs(b.deviation - 0.5));
  err = std::max(err, std::fabs(res.covered_mass - 1.0));
  err = std::max(err, std::fabs(res.mean));
  finish_exact(rec, err, ctx.tol);
  rec.params = params_str({{"tau", "0.4"}, {"size_cap", "1"}});
}

void check_booster_parity(const Ctx& ctx, CheckRecord& rec) {
  ComplexPtr X = gen_uniform_cube(3);
  rec.complex_id = X->id();
  FaceFunction f = builtin_function(X, "parity", {});
  double err = 0.0;
  BoosterSearchResult below = booster_search(f, 2, 0.1);
  err = std::max(err, static_cast<double>(below.boosters.size()));
  err = std::max(err, below.covered_mass);
  BoosterSearchResult full = booster_search(f, 3, 0.5);
  err = std::max(err, std::fabs(static_cast<double>(full.boosters.size()) - 8.0));
  for (const BoosterRecord& b : full.boosters)
    err = std::max(err, std::fabs(b.deviation - 1.0));
  finish_exact(rec, err, ctx.tol);
  rec.params = params_str({{"tau", "0.1,0.5"}});
}

void check_markov_step(const Ctx& ctx, CheckRecord& rec) {
  double worst_lhs = 0.0, worst_rhs = 0.0, worst_margin = -1e300;
  bool all_pass = true;
  const int instances = 3;
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = product_instance(mix_seed(ctx.seed, t), 4, 3);
    if (t == 0) rec.complex_id = X->id();
    FaceFunction f = gauss_fn(X, mix_seed(ctx.seed, 100 + t));
    EfronSteinDecomposition dec = decompose(f);
    LevelProfile lp = level_profile(dec, f);
    const double influence = total_influence(f, dec).via_levels;
    for (int ell = 1; ell < X->dimension(); ++ell) {
      double tail = 0.0;
      for (size_t i = ell + 1; i < lp.weight.size(); ++i) tail += lp.weight[i];
      const double bound = influence / ell;
      all_pass = all_pass && tail <= bound + ctx.tol * err_scale(tail, bound);
      const double margin = (tail - bound) / err_scale(tail, bound);
      if (margin > worst_margin) {
        worst_margin = margin;
        worst_lhs = tail;
        worst_rhs = bound;
      }
    }
  }
  rec.lhs = worst_lhs;
  rec.rhs = worst_rhs;
  rec.status = all_pass ? CheckStatus::Pass : CheckStatus::Fail;
  rec.params = params_str({{"instances", std::to_string(instances)}});
}

void check_tensor_power(const Ctx& ctx, CheckRecord& rec) {
  double err = 0.0;
  const int instances = 2;
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = gen_random_product({2, 2}, mix_seed(ctx.seed, t));
    if (t == 0) rec.complex_id = X->id();
    FaceFunction f = gauss_fn(X, mix_seed(ctx.seed, 100 + t));
    const double r_base = globalness(f).minimal_r;
    for (int power : {2, 3}) {
      FaceFunction F = tensor_power_function(f, power);
      const double rho = 0.5, q = 3.0;
      const double lhs =
          es_noise_apply(decompose(F),
                         std::vector<double>(F.complex()->dimension(), rho))
              .norm(q);
      const double rhs = std::pow(
          es_noise_apply(decompose(f),
                         std::vector<double>(X->dimension(), rho))
              .norm(q),
          power);
      err = std::max(err, scaled_diff(lhs, rhs));
      err = std::max(err, scaled_diff(globalness(F).minimal_r, r_base));
    }
  }
  finish_exact(rec, err, std::max(ctx.tol, 1e-8));
  rec.params = params_str({{"instances", std::to_string(instances)},
                           {"powers", "2,3"},
                           {"rho", "0.5"},
                           {"q", "3"}});
}

void check_notable_residual(const Ctx& ctx, CheckRecord& rec) {
  double err = 0.0;
  const int instances = 3;
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = sparse_instance(mix_seed(ctx.seed, t), 4, 3);
    if (t == 0) rec.complex_id = X->id();
    FaceFunction f = gauss_fn(X, mix_seed(ctx.seed, 100 + t));
    EfronSteinDecomposition dec = decompose(f);
    const int d = X->dimension();
    const double tau = 0.05;
    const int ell = 2;
    const double C = 2.0;
    for (int face = 0; face < std::min(4, X->face_count()); ++face) {
      NotableCoordinates nc = notable_coordinates(dec, face, tau, ell, C);
      // Independent recomputation of J' and the residual.
      ColorSet jp;
      for (int j = 0; j < d; ++j) {
        double mass = 0.0;
        for (uint32_t s = 0; s < (1u << d); ++s)
          if (ColorSet(s).contains(j)) {
            const double v = dec.component(ColorSet(s)).at_face(face);
            mass += v * v;
          }
        if (mass >= tau - 1e-12) jp = jp.with(j);
      }
      err = std::max(
          err, static_cast<double>(jp.bits() != nc.J_prime.bits()));
      const ColorSet J = nc.J;
      double residual = 0.0;
      for (uint32_t s = 0; s < (1u << d); ++s) {
        const ColorSet S(s);
        const bool kept = S.subset_of(J) && S.size() <= ell;
        if (!kept) {
          const double v = dec.component(S).at_face(face);
          residual += v * v;
        }
      }
      err = std::max(err, scaled_diff(residual, nc.residual_mass));
    }
  }
  finish_exact(rec, err, ctx.tol);
  rec.params = params_str({{"instances", std::to_string(instances)},
                           {"tau", "0.05"},
                           {"ell", "2"},
                           {"C", "2"}});
}

void check_operator_form_diagnostic(const Ctx& ctx, CheckRecord& rec) {
  double worst_slack = -1e300;
  const int instances = 2;
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = nearproduct_instance(mix_seed(ctx.seed, t), 3, 0.02);
    if (t == 0) rec.complex_id = X->id();
    FaceFunction f = gauss_fn(X, mix_seed(ctx.seed, 100 + t));
    const double r = globalness(f).minimal_r;
    OperatorFormCheck c = operator_form_check(f, 1.0 / (4.0 * r), 4.0);
    worst_slack = std::max(worst_slack, c.slack);
  }
  rec.lhs = worst_slack;
  rec.rhs = 0.25;
  rec.status = CheckStatus::Diagnostic;
  rec.message = "no pinned constant; recorded slack only";
  rec.params = params_str({{"instances", std::to_string(instances)},
                           {"rho", "1/(4r)"},
                           {"q", "4"}});
}

// ---- oracles --------------------------------------------------------------------

void check_norm_agreement(const Ctx& ctx, CheckRecord& rec) {
  double err = 0.0;
  const int instances = 3;
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = sparse_instance(mix_seed(ctx.seed, t));
    if (t == 0) rec.complex_id = X->id();
    FaceFunction f = gauss_fn(X, mix_seed(ctx.seed, 100 + t));
    for (double q : {1.0, 2.0, 3.0, 4.5})
      err = std::max(err, scaled_diff(oracle_norm(f, q), f.norm(q)));
  }
  finish_exact(rec, err, ctx.tol);
  rec.params = params_str({{"instances", std::to_string(instances)},
                           {"q", "1,2,3,4.5"}});
}

void check_opnorm_bracket(const Ctx& ctx, CheckRecord& rec) {
  double err = 0.0;
  const int instances = 3;
  for (int t = 0; t < instances; ++t) {
    ComplexPtr X = gen_random_sparse({3, 3}, 8, mix_seed(ctx.seed, t));
    if (t == 0) rec.complex_id = X->id();
    const ColorSet S = ColorSet::single(0), T = ColorSet::single(1);
    Operator op = centered_swap(X, S, T);
    const double q = 3.0;
    const double v = oracle_opnorm_dense(
        op.materialize(), X->marginal_table(T).weight,
        X->marginal_table(S).weight, q, mix_seed(ctx.seed, 40 + t));
    AscentOptions opts;
    opts.seed = mix_seed(ctx.seed, 90 + t);
    const double lower = opnorm_q_lower(op, q, opts).lower;
    const double upper = opnorm_q_interp_upper(op, q);
    err = std::max(err, std::max(lower - v, 0.0) / err_scale(lower, v));
    err = std::max(err, std::max(v - upper, 0.0) / err_scale(v, upper));
  }
  finish_exact(rec, err, std::max(ctx.tol, 1e-7));
  rec.params = params_str({{"instances", std::to_string(instances)},
                           {"q", "3"}});
}

// ---- fixtures --------------------------------------------------------------------

void check_intentional_failure(const Ctx& ctx, CheckRecord& rec) {
  ComplexPtr X = gen_uniform_cube(2);
  rec.complex_id = X->id();
  Eigen::MatrixXd M =
      swap_walk(X, ColorSet::single(0), ColorSet::single(1)).materialize();
  M(0, 0) += 0.1;
  double err = 0.0;
  for (int r = 0; r < M.rows(); ++r)
    err = std::max(err, std::fabs(M.row(r).sum() - 1.0));
  finish_exact(rec, err, ctx.tol);
  rec.message = "corrupted on purpose to exercise failure reporting";
}

// ---- registry --------------------------------------------------------------------

const std::vector<CheckDef>& registry() {
  static const std::vector<CheckDef> defs = {
      {"core/marginal-consistency",
       "X[S](x_S) = sum over top faces projecting to x_S of their weights",
       check_marginal_consistency},
      {"core/link-normalization",
       "links carry the Bayes-conditioned weights and total mass 1",
       check_link_normalization},
      {"es/decomposition-sum", "sum_S f^{=S} = f on every complex",
       check_decomposition_sum},
      {"es/inclusion-exclusion", "E_S f = sum_{T subset S} f^{=T}",
       check_inclusion_exclusion},
      {"es/noise-forms",
       "the decomposition and binomial forms of T_r agree pointwise",
       check_noise_forms},
      {"es/localization",
       "T^S_r f computed globally matches the same noise inside each link",
       check_localization},
      {"es/restriction-identity",
       "f^{=IuB}(y,x) = sum_{J subset I} (-1)^{|I|-|J|} (f|_{y_J})^{=B}(x)",
       check_restriction_identity},
      {"es/total-influence",
       "sum_i <f, L_i f> = sum_i i <f, f^{=i}>", check_total_influence},
      {"es/contraction", "||f^{=S}||_q <= 2^{|S|} ||f||_q", check_contraction},
      {"product/orthogonality",
       "<f^{=S}, f^{=T}> = 0 for S != T under product measures",
       check_orthogonality},
      {"product/parseval",
       "sum_S ||f^{=S}||_2^2 = ||f||_2^2 under product measures",
       check_parseval},
      {"product/projection-semigroup",
       "E_S E_T = E_{S n T} under product measures", check_projection_semigroup},
      {"product/swap-equals-stationary",
       "A_{S,T} = Pi_{S,T} under product measures",
       check_swap_equals_stationary},
      {"product/decorrelation-exact",
       "T_r equals every ordered composition of coordinate noises on products",
       check_decorrelation_exact},
      {"sym/sandwich-product",
       "||(T_{2/5} f)~||_q <= ||f||_q <= ||(T_2 f)~||_q on products, q in "
       "{4, 4/3}",
       check_sandwich_product},
      {"sym/scalar-half",
       "||a + X/2||_q <= ||a + rX||_q for mean-zero X and a uniform sign r",
       check_scalar_half},
      {"sym/scalar-lower-q4", "||a - (2/5)X||_4 <= ||a + X||_4 for mean-zero X",
       check_scalar_lower_q4},
      {"sym/coefficient-recovery",
       "the sign-Fourier coefficient of f~ at S is the lifted f^{=S}",
       check_coefficient_recovery},
      {"sym/decorrelation-bound",
       "||T_r f - T^{pi}_r f||_2 <= c_{d,r} gamma_2 ||f||_2",
       check_decorrelation_bound},
      {"sym/permutation-robustness",
       "two coordinate orders differ by at most twice the decorrelation bound",
       check_permutation_robustness},
      {"expansion/ascent-vs-svd",
       "the q = 2 ascent lower bound reaches the top singular value",
       check_ascent_vs_svd},
      {"expansion/riesz-thorin",
       "ascent lower bounds stay below the interpolation upper bounds",
       check_riesz_thorin},
      {"expansion/two-point",
       "||A - Pi||_q = |1 - 2a| on the two-point chain", check_two_point},
      {"expansion/product-gamma", "gamma = 0 for product measures",
       check_product_gamma},
      {"expansion/swap-norm-bound",
       "||A_{S,T} - Pi_{S,T}||_q <= |S||T| gamma_q", check_swap_norm_bound},
      {"hyper/bonami-q4",
       "||f^{<=i}||_4^4 <= (2000)^{4i} ||f^{<=i}||_2^2 max_{|S|<=i,x_S} "
       "||f|_{x_S}||_2^2",
       check_bonami_q4},
      {"hyper/cube-sqrt3",
       "||f^{<=i}||_4 <= sqrt(3)^i ||f^{<=i}||_2 on uniform binary products",
       check_cube_sqrt3},
      {"hyper/level-i-hoelder", "<f, f^{<=i}> <= ||f||_{4/3} ||f^{<=i}||_4",
       check_level_i_hoelder},
      {"hyper/two-vs-four-thirds",
       "||T_{1/sqrt3} f~(., x)||_2 <= ||f~(., x)||_{4/3} per top face",
       check_two_vs_four_thirds},
      {"hyper/dictator-counterexample",
       "the coordinate indicator at p = 1/4 has r = 4 and 4-norm mass r "
       "times the square of its 2-norm mass",
       check_dictator_counterexample},
      {"hyper/booster-majority",
       "majority on three uniform bits has six size-1 boosters of deviation "
       "1/2 covering mass 1",
       check_booster_majority},
      {"hyper/booster-parity",
       "parity has no boosters below full size and eight full-size ones",
       check_booster_parity},
      {"hyper/markov-step",
       "sum_{|S| > l} ||f^{=S}||_2^2 <= I[f] / l", check_markov_step},
      {"hyper/tensor-power",
       "||T_rho f^{(x)t}||_q = ||T_rho f||_q^t and globalness is preserved "
       "on product bases",
       check_tensor_power},
      {"hyper/notable-residual",
       "the notable-coordinate residual equals the excluded component mass",
       check_notable_residual},
      {"hyper/operator-form-diagnostic",
       "slack of ||T_rho f||_q against ||f||_2 at rho = 1/(4r), recorded "
       "only",
       check_operator_form_diagnostic},
      {"oracle/norm-agreement",
       "library q-norms match direct summation", check_norm_agreement},
      {"oracle/opnorm-bracket",
       "the dense orthant search lands inside the ascent/interpolation "
       "bracket",
       check_opnorm_bracket},
      {"fixture/intentional-failure",
       "a corrupted swap walk must fail row-stochasticity",
       check_intentional_failure},
  };
  return defs;
}

bool is_fixture(const std::string& name) {
  return name.rfind("fixture/", 0) == 0;
}

}  // namespace

std::vector<CheckInfo> registered_checks() {
  std::vector<CheckInfo> out;
  for (const CheckDef& def : registry()) out.push_back({def.name, def.ref});
  return out;
}

SuiteResult run_suite(const SuiteOptions& opts) {
  const std::vector<CheckDef>& defs = registry();
  std::vector<const CheckDef*> selected;
  if (opts.checks.empty()) {
    for (const CheckDef& def : defs)
      if (!is_fixture(def.name)) selected.push_back(&def);
  } else {
    for (const std::string& name : opts.checks) {
      const CheckDef* found = nullptr;
      for (const CheckDef& def : defs)
        if (name == def.name) {
          found = &def;
          break;
        }
      if (!found) throw Error("run_suite: unknown check '" + name + "'");
      selected.push_back(found);
    }
  }

  SuiteResult result;
  result.records.resize(selected.size());
  parallel_for(
      static_cast<int>(selected.size()),
      [&](int i) {
        const CheckDef& def = *selected[i];
        CheckRecord rec;
        rec.name = def.name;
        rec.ref = def.ref;
        Ctx ctx;
        ctx.seed = mix_seed(opts.seed, fnv1a(def.name));
        ctx.tol = opts.tol;
        rec.seed = ctx.seed;
        const auto start = std::chrono::steady_clock::now();
        try {
          def.fn(ctx, rec);
        } catch (const std::exception& e) {
          rec.status = CheckStatus::Error;
          rec.message = e.what();
        }
        rec.slack = rec.rhs - rec.lhs;
        rec.runtime_ms =
            std::chrono::duration<double, std::milli>(
                std::chrono::steady_clock::now() - start)
                .count();
        result.records[i] = std::move(rec);
      },
      opts.jobs);

  for (const CheckRecord& rec : result.records) {
    if (rec.status == CheckStatus::Fail) ++result.failed;
    if (rec.status == CheckStatus::Error) ++result.errored;
  }
  if (!opts.out.empty())
    write_atomic(opts.out,
                 report_json(result.records, opts.include_runtime));
  if (!opts.csv.empty()) write_atomic(opts.csv, report_csv(result.records));
  return result;
}

SuiteOptions suite_options_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("suite config: ") + e.what());
  }
  if (!j.is_object()) throw Error("suite config: expected a JSON object");
  SuiteOptions opts;
  for (const auto& [key, value] : j.items()) {
    if (key == "checks") {
      if (value.is_string()) {
        if (value.get<std::string>() != "all")
          throw Error("suite config: checks must be \"all\" or an array");
      } else if (value.is_array()) {
        for (const auto& item : value) {
          if (!item.is_string())
            throw Error("suite config: check names must be strings");
          opts.checks.push_back(item.get<std::string>());
        }
      } else {
        throw Error("suite config: checks must be \"all\" or an array");
      }
    } else if (key == "seed") {
      if (!value.is_number_unsigned() && !value.is_number_integer())
        throw Error("suite config: seed must be an integer");
      opts.seed = value.get<uint64_t>();
    } else if (key == "tol") {
      if (!value.is_number()) throw Error("suite config: tol must be a number");
      opts.tol = value.get<double>();
    } else if (key == "jobs") {
      if (!value.is_number_integer())
        throw Error("suite config: jobs must be an integer");
      opts.jobs = value.get<int>();
    } else if (key == "include_runtime") {
      if (!value.is_boolean())
        throw Error("suite config: include_runtime must be a boolean");
      opts.include_runtime = value.get<bool>();
    } else if (key == "out") {
      if (!value.is_string()) throw Error("suite config: out must be a string");
      opts.out = value.get<std::string>();
    } else if (key == "csv") {
      if (!value.is_string()) throw Error("suite config: csv must be a string");
      opts.csv = value.get<std::string>();
    } else {
      throw Error("suite config: unknown key '" + key + "'");
    }
  }
  return opts;
}

}  // namespace hdx
