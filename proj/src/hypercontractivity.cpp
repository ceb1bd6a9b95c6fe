#include "hdx/hypercontractivity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "hdx/symmetrization.hpp"
#include "hdx/util.hpp"

namespace hdx {

namespace {

void require_top(const FaceFunction& f, const char* what) {
  if (!f.complex()) throw Error(std::string(what) + ": empty function");
  if (f.domain() != ColorSet::all(f.complex()->dimension()))
    throw Error(std::string(what) + ": f must live on the top faces");
}

void require_desk_dim(int d, const char* what) {
  if (d > kHyperMaxDim)
    throw Error(std::string(what) + ": dimension " + std::to_string(d) +
                " exceeds the exhaustive-search cap " +
                std::to_string(kHyperMaxDim));
}

void require_even_q(double q, const char* what) {
  const double rounded = std::round(q);
  if (!(q >= 2.0) || std::fabs(q - rounded) > 1e-9 ||
      std::llround(rounded) % 2 != 0)
    throw Error(std::string(what) + ": q must be an even integer >= 2, got " +
                format_g17(q));
}

int checked_cap(int size_cap, int d, const char* what) {
  if (size_cap < 0) throw Error(std::string(what) + ": negative size_cap");
  if (size_cap > d)
    throw Error(std::string(what) + ": size_cap exceeds the dimension");
  if (size_cap > kHyperMaxCap)
    throw Error(std::string(what) + ": size_cap " + std::to_string(size_cap) +
                " exceeds the exhaustive-search cap " +
                std::to_string(kHyperMaxCap));
  return size_cap;
}

// Conditional second moments E[f^2 | x_S] for every feasible x_S, S fixed.
std::vector<double> conditional_second_moments(const FaceFunction& f,
                                               ColorSet S) {
  const PartiteComplex& X = *f.complex();
  const MarginalTable& tb = X.marginal_table(S);
  std::vector<double> num(tb.rows(), 0.0);
  for (int i = 0; i < X.face_count(); ++i)
    num[tb.face_row[i]] += X.face_weight(i) * f.at_face(i) * f.at_face(i);
  for (int r = 0; r < tb.rows(); ++r) num[r] /= tb.weight[r];
  return num;
}

// max over |S| <= max_size and x_S of E[f^2 | x_S], split by |S|.
std::vector<double> restriction_sweep(const FaceFunction& f, int max_size) {
  const int d = f.complex()->dimension();
  std::vector<double> best(max_size + 1, 0.0);
  best[0] = f.norm2_sq();
  for (uint32_t bits = 1; bits < (1u << d); ++bits) {
    const ColorSet S(bits);
    if (S.size() > max_size) continue;
    for (double m : conditional_second_moments(f, S))
      best[S.size()] = std::max(best[S.size()], m);
  }
  return best;
}

// Masks of a given popcount, sorted lexicographically by member list.
std::vector<ColorSet> masks_of_size(int d, int s) {
  std::vector<ColorSet> out;
  for (uint32_t bits = 0; bits < (1u << d); ++bits)
    if (std::popcount(bits) == s) out.push_back(ColorSet(bits));
  std::sort(out.begin(), out.end(), [](ColorSet a, ColorSet b) {
    return a.members() < b.members();
  });
  return out;
}

std::vector<double> conditional_means(const FaceFunction& f,
                                      const MarginalTable& tb) {
  const PartiteComplex& X = *f.complex();
  std::vector<double> num(tb.rows(), 0.0);
  for (int i = 0; i < X.face_count(); ++i)
    num[tb.face_row[i]] += X.face_weight(i) * f.at_face(i);
  for (int r = 0; r < tb.rows(); ++r) num[r] /= tb.weight[r];
  return num;
}

void require_values(const FaceFunction& f, double lo, double hi,
                    const char* what, const char* set_name) {
  for (double v : f.values())
    if (std::fabs(v - lo) > 1e-12 && std::fabs(v - hi) > 1e-12)
      throw Error(std::string(what) + ": f must take values in " + set_name +
                  ", got " + format_g17(v));
}

}  // namespace

GlobalnessProfile globalness(const FaceFunction& f) {
  require_top(f, "globalness");
  const int d = f.complex()->dimension();
  require_desk_dim(d, "globalness");
  const double total = f.norm2_sq();
  if (total <= 0.0) throw Error("globalness: zero function");

  GlobalnessProfile out;
  out.by_size.assign(d + 1, 0.0);
  std::vector<double> best = restriction_sweep(f, d);
  for (int s = 0; s <= d; ++s) out.by_size[s] = best[s] / total;
  out.minimal_r = 1.0;
  for (int s = 1; s <= d; ++s)
    out.minimal_r = std::max(out.minimal_r, std::pow(out.by_size[s], 1.0 / s));
  return out;
}

BonamiCheck bonami_check(const FaceFunction& f, int i, double q) {
  require_top(f, "bonami_check");
  require_even_q(q, "bonami_check");
  const int d = f.complex()->dimension();
  require_desk_dim(d, "bonami_check");
  if (i < 0 || i > d)
    throw Error("bonami_check: level " + std::to_string(i) + " out of range");

  BonamiCheck out;
  out.i = i;
  out.q = q;
  const FaceFunction low = truncate(decompose(f), i);
  out.lhs = std::pow(low.norm(q), q);
  out.low2_sq = low.norm2_sq();
  std::vector<double> best = restriction_sweep(f, i);
  out.max_restriction_sq = *std::max_element(best.begin(), best.end());
  out.rhs = std::pow(500.0 * q, q * i) * out.low2_sq *
            std::pow(out.max_restriction_sq, (q - 2.0) / 2.0);
  out.ratio = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
  out.pass = out.lhs <= out.rhs + 1e-9 * err_scale(out.lhs, out.rhs);
  return out;
}

OperatorFormCheck operator_form_check(const FaceFunction& f, double rho,
                                      double q) {
  require_top(f, "operator_form_check");
  require_even_q(q, "operator_form_check");
  if (rho < 0.0 || rho > 1.0)
    throw Error("operator_form_check: rho must lie in [0,1]");

  OperatorFormCheck out;
  out.rho = rho;
  out.q = q;
  out.r = globalness(f).minimal_r;
  const int d = f.complex()->dimension();
  const FaceFunction noisy =
      es_noise_apply(decompose(f), std::vector<double>(d, rho));
  out.lhs = noisy.norm(q);
  out.f_norm2 = f.norm(2.0);
  out.slack = out.lhs / out.f_norm2 - 1.0;
  out.in_regime = rho <= 1.0 / (out.r * q) + 1e-15;
  return out;
}

TwoVsFourThirdsCheck two_vs_four_thirds_check(const FaceFunction& f) {
  require_top(f, "two_vs_four_thirds_check");
  const SymmetrizedFunction sym = symmetrize(f);
  const int d = sym.dimension();
  const uint32_t rows = 1u << d;
  const double rho = 1.0 / std::sqrt(3.0);

  TwoVsFourThirdsCheck out;
  out.worst_margin = -std::numeric_limits<double>::infinity();
  out.pass = true;
  std::vector<double> col(rows);
  for (int j = 0; j < sym.table.cols(); ++j) {
    double rhs_q = 0.0;
    for (uint32_t rmask = 0; rmask < rows; ++rmask) {
      col[rmask] = sym.table(rmask, j);
      rhs_q += std::pow(std::fabs(col[rmask]), 4.0 / 3.0);
    }
    const double rhs = std::pow(rhs_q / rows, 3.0 / 4.0);
    walsh_hadamard(std::span<double>(col.data(), rows));
    double lhs_sq = 0.0;
    for (uint32_t s = 0; s < rows; ++s) {
      const double coeff = col[s] / rows;
      lhs_sq += std::pow(rho * rho, std::popcount(s)) * coeff * coeff;
    }
    const double lhs = std::sqrt(lhs_sq);
    const double margin = lhs - rhs;
    if (margin > out.worst_margin) {
      out.worst_margin = margin;
      out.worst_face = j;
    }
    if (lhs > rhs + 1e-9 * err_scale(lhs, rhs)) out.pass = false;
  }
  return out;
}

KKLWitness kkl_witness(const FaceFunction& f, int size_cap) {
  require_top(f, "kkl_witness");
  require_values(f, 0.0, 1.0, "kkl_witness", "{0,1}");
  const PartiteComplex& X = *f.complex();
  const int d = X.dimension();
  require_desk_dim(d, "kkl_witness");
  checked_cap(size_cap, d, "kkl_witness");

  KKLWitness out;
  out.mean = f.mean();
  out.S = ColorSet();
  out.density = out.mean;
  for (int s = 1; s <= size_cap; ++s) {
    for (ColorSet S : masks_of_size(d, s)) {
      const MarginalTable& tb = X.marginal_table(S);
      std::vector<double> cond = conditional_means(f, tb);
      for (int r = 0; r < tb.rows(); ++r) {
        if (cond[r] > out.density + 1e-12) {
          out.density = cond[r];
          out.S = S;
          auto row = tb.row(r);
          out.assignment.assign(row.begin(), row.end());
        }
      }
    }
  }
  return out;
}

BoosterSearchResult booster_search(const FaceFunction& f, int size_cap,
                                   double tau) {
  require_top(f, "booster_search");
  require_values(f, -1.0, 1.0, "booster_search", "{-1,+1}");
  if (!(tau > 0.0)) throw Error("booster_search: tau must be positive");
  const PartiteComplex& X = *f.complex();
  const int d = X.dimension();
  require_desk_dim(d, "booster_search");
  checked_cap(size_cap, d, "booster_search");

  BoosterSearchResult out;
  out.tau = tau;
  out.size_cap = size_cap;
  out.mean = f.mean();
  out.variance = f.norm2_sq() - out.mean * out.mean;

  std::vector<char> covered(X.face_count(), 0);
  for (int s = 1; s <= size_cap; ++s) {
    for (ColorSet T : masks_of_size(d, s)) {
      const MarginalTable& tb = X.marginal_table(T);
      std::vector<double> cond = conditional_means(f, tb);
      std::vector<char> hit(tb.rows(), 0);
      for (int r = 0; r < tb.rows(); ++r) {
        const double dev = std::fabs(cond[r] - out.mean);
        if (dev + 1e-12 < tau) continue;
        hit[r] = 1;
        BoosterRecord rec;
        rec.T = T;
        auto row = tb.row(r);
        rec.assignment.assign(row.begin(), row.end());
        rec.conditional = cond[r];
        rec.deviation = dev;
        out.boosters.push_back(std::move(rec));
      }
      for (int i = 0; i < X.face_count(); ++i)
        if (hit[tb.face_row[i]]) covered[i] = 1;
    }
  }
  for (int i = 0; i < X.face_count(); ++i)
    if (covered[i]) out.covered_mass += X.face_weight(i);

  std::sort(out.boosters.begin(), out.boosters.end(),
            [](const BoosterRecord& a, const BoosterRecord& b) {
              if (a.deviation != b.deviation) return a.deviation > b.deviation;
              if (a.size() != b.size()) return a.size() < b.size();
              if (a.T.bits() != b.T.bits())
                return a.T.members() < b.T.members();
              return a.assignment < b.assignment;
            });
  return out;
}

BoosterDefaults booster_defaults(double K) {
  if (!(K > 0.0)) throw Error("booster_defaults: K must be positive");
  BoosterDefaults out;
  out.size_cap = static_cast<int>(std::ceil(2.0 * K));
  out.tau = std::pow(2.0, -K * K);
  return out;
}

NotableCoordinates notable_coordinates(const EfronSteinDecomposition& dec,
                                       int32_t face, double tau, int ell,
                                       double C) {
  const PartiteComplex& X = *dec.X;
  const int d = X.dimension();
  if (face < 0 || face >= X.face_count())
    throw Error("notable_coordinates: face index out of range");
  if (!(tau > 0.0)) throw Error("notable_coordinates: tau must be positive");
  if (ell < 0) throw Error("notable_coordinates: ell must be >= 0");
  if (!(C > 0.0)) throw Error("notable_coordinates: C must be positive");

  NotableCoordinates out;
  out.face = face;
  out.tau = tau;
  out.ell = ell;
  out.cap = std::pow(C, ell);

  std::vector<double> comp_sq(size_t(1) << d, 0.0);
  for (uint32_t bits = 0; bits < (1u << d); ++bits) {
    const double v = dec.components[bits].at_face(face);
    comp_sq[bits] = v * v;
  }
  for (int j = 0; j < d; ++j) {
    double infl = 0.0;
    for (uint32_t bits = 0; bits < (1u << d); ++bits)
      if ((bits >> j) & 1u) infl += comp_sq[bits];
    if (infl >= tau - 1e-12) out.J_prime = out.J_prime.with(j);
  }
  out.truncated = out.J_prime.size() > out.cap;
  out.J = out.truncated ? ColorSet() : out.J_prime;
  for (uint32_t bits = 0; bits < (1u << d); ++bits) {
    const ColorSet S(bits);
    const bool in_family = S.subset_of(out.J) && S.size() <= ell;
    if (!in_family) out.residual_mass += comp_sq[bits];
  }
  return out;
}

NotableCoordinates notable_coordinates(const FaceFunction& f, int32_t face,
                                       double tau, int ell, double C) {
  require_top(f, "notable_coordinates");
  return notable_coordinates(decompose(f), face, tau, ell, C);
}

FaceFunction boolean_to_pm1(const FaceFunction& f) {
  require_values(f, 0.0, 1.0, "boolean_to_pm1", "{0,1}");
  std::vector<double> v(f.values());
  for (double& x : v) x = 2.0 * x - 1.0;
  return FaceFunction::on(f.complex(), f.domain(), std::move(v));
}

FaceFunction pm1_to_boolean(const FaceFunction& f) {
  require_values(f, -1.0, 1.0, "pm1_to_boolean", "{-1,+1}");
  std::vector<double> v(f.values());
  for (double& x : v) x = (x + 1.0) / 2.0;
  return FaceFunction::on(f.complex(), f.domain(), std::move(v));
}

FaceFunction tensor_power_function(const FaceFunction& f, int t) {
  require_top(f, "tensor_power_function");
  const PartiteComplex& X = *f.complex();
  const int d = X.dimension();
  if (d * t > 30)
    throw Error("tensor_power_function: power dimension too large");
  ComplexPtr Xt = tensor_power(X, t);
  const ColorSet all = ColorSet::all(d * t);
  const MarginalTable& top = Xt->marginal_table(all);
  std::vector<double> values(top.rows(), 0.0);
  for (int i = 0; i < Xt->face_count(); ++i) {
    auto face = Xt->face(i);
    double prod = 1.0;
    for (int b = 0; b < t; ++b) {
      const int idx = X.find_face(face.subspan(size_t(b) * d, d));
      if (idx < 0)
        throw Error("tensor_power_function: block outside base support");
      prod *= f.at_face(idx);
    }
    values[top.face_row[i]] = prod;
  }
  return FaceFunction::on(Xt, all, std::move(values));
}

}  // namespace hdx
