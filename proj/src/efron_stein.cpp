#include "hdx/efron_stein.hpp"

#include <cmath>
#include <map>

#include "hdx/operators.hpp"
#include "hdx/rng.hpp"

namespace hdx {

namespace {

void require_top(const FaceFunction& f, const char* what) {
  if (!f.complex()) throw Error(std::string(what) + ": empty function");
  if (f.domain() != ColorSet::all(f.complex()->dimension()))
    throw Error(std::string(what) + ": f must live on the top faces");
}

}  // namespace

FaceFunction EfronSteinDecomposition::lifted(ColorSet S) const {
  return component(S).lift_to(ColorSet::all(dimension()));
}

EfronSteinDecomposition decompose(const FaceFunction& f) {
  require_top(f, "decompose");
  const ComplexPtr& X = f.complex();
  const int d = X->dimension();
  if (d > 16) throw Error("decompose: dimension cap is 16");
  const ColorSet all = ColorSet::all(d);

  // All conditional expectations first; every component is then an
  // inclusion-exclusion over these tables.
  std::vector<FaceFunction> proj(1u << d);
  for_each_subset(all, [&](ColorSet T) {
    proj[T.bits()] = projection_E(X, T).apply(f);
  });

  EfronSteinDecomposition dec;
  dec.X = X;
  dec.components.resize(1u << d);
  for_each_subset(all, [&](ColorSet S) {
    const MarginalTable& tab = X->marginal_table(S);
    std::vector<double> vals(tab.rows(), 0.0);
    for_each_subset(S, [&](ColorSet T) {
      const double sign = parity_sign(S.size() - T.size());
      const FaceFunction& e = proj[T.bits()];
      auto rows = X->projection_rows(S, T);
      for (int r = 0; r < tab.rows(); ++r) vals[r] += sign * e[(*rows)[r]];
    });
    dec.components[S.bits()] = FaceFunction::on(X, S, std::move(vals));
  });
  return dec;
}

FaceFunction es_component(const FaceFunction& f, ColorSet S) {
  require_top(f, "es_component");
  const ComplexPtr& X = f.complex();
  const MarginalTable& tab = X->marginal_table(S);
  std::vector<double> vals(tab.rows(), 0.0);
  for_each_subset(S, [&](ColorSet T) {
    const double sign = parity_sign(S.size() - T.size());
    const FaceFunction e = projection_E(X, T).apply(f);
    auto rows = X->projection_rows(S, T);
    for (int r = 0; r < tab.rows(); ++r) vals[r] += sign * e[(*rows)[r]];
  });
  return FaceFunction::on(X, S, std::move(vals));
}

FaceFunction truncate(const EfronSteinDecomposition& dec, int i) {
  const int d = dec.dimension();
  if (i < 0 || i > d) throw Error("truncate: level out of range");
  FaceFunction acc = FaceFunction::constant(dec.X, ColorSet::all(d), 0.0);
  for_each_subset(ColorSet::all(d), [&](ColorSet S) {
    if (S.size() <= i) acc += dec.lifted(S);
  });
  return acc;
}

FaceFunction level_part(const EfronSteinDecomposition& dec, int i) {
  const int d = dec.dimension();
  if (i < 0 || i > d) throw Error("level_part: level out of range");
  FaceFunction acc = FaceFunction::constant(dec.X, ColorSet::all(d), 0.0);
  for_each_subset(ColorSet::all(d), [&](ColorSet S) {
    if (S.size() == i) acc += dec.lifted(S);
  });
  return acc;
}

FaceFunction es_noise_apply(const EfronSteinDecomposition& dec,
                            const std::vector<double>& r) {
  const int d = dec.dimension();
  if (static_cast<int>(r.size()) != d)
    throw Error("es_noise_apply: r must have one entry per color");
  FaceFunction acc = FaceFunction::constant(dec.X, ColorSet::all(d), 0.0);
  for_each_subset(ColorSet::all(d), [&](ColorSet S) {
    double rs = 1.0;
    for (int i : S.members()) rs *= r[i];
    if (rs == 0.0) return;
    acc += rs * dec.lifted(S);
  });
  return acc;
}

TotalInfluence total_influence(const FaceFunction& f,
                               const EfronSteinDecomposition& dec) {
  require_top(f, "total_influence");
  const ComplexPtr& X = f.complex();
  const int d = X->dimension();
  TotalInfluence out;
  for (int i = 0; i < d; ++i)
    out.via_laplacians += f.inner(laplacian(X, i).apply(f));
  for (int i = 1; i <= d; ++i)
    out.via_levels += i * f.inner(level_part(dec, i));
  return out;
}

TotalInfluence total_influence(const FaceFunction& f) {
  return total_influence(f, decompose(f));
}

LevelProfile level_profile(const EfronSteinDecomposition& dec,
                           const FaceFunction& f) {
  require_top(f, "level_profile");
  const int d = dec.dimension();
  LevelProfile p;
  p.weight.assign(d + 1, 0.0);
  p.pairing.assign(d + 1, 0.0);
  for_each_subset(ColorSet::all(d), [&](ColorSet S) {
    p.weight[S.size()] += dec.component(S).norm2_sq();
  });
  for (int i = 0; i <= d; ++i) p.pairing[i] = f.inner(level_part(dec, i));
  return p;
}

double restriction_identity_check(const FaceFunction& f, ColorSet I,
                                  ColorSet B, int sample_budget,
                                  uint64_t seed) {
  require_top(f, "restriction_identity_check");
  const ComplexPtr& X = f.complex();
  const int d = X->dimension();
  X->check_colors(I | B, "restriction_identity_check");
  if (I.intersects(B))
    throw Error("restriction_identity_check: I and B must be disjoint");

  const ColorSet IB = I | B;
  const MarginalTable& tib = X->marginal_table(IB);

  std::vector<int> rows(tib.rows());
  for (int r = 0; r < tib.rows(); ++r) rows[r] = r;
  if (sample_budget > 0 && tib.rows() > sample_budget) {
    Rng rng(mix_seed(seed, fnv1a(X->id())));
    for (int i = 0; i < sample_budget; ++i) {
      const int j = rng.uniform_int(i, tib.rows() - 1);
      std::swap(rows[i], rows[j]);
    }
    rows.resize(sample_budget);
  }

  const FaceFunction lhs = es_component(f, IB);

  // Positions of the B-colors inside the rows of X[I u B].
  const auto bcols = B.members();
  std::vector<int> bpos(bcols.size());
  for (size_t j = 0; j < bcols.size(); ++j) bpos[j] = IB.rank_of(bcols[j]);

  // Per (J, y_J): the inner component (f|_{y_J})^{=B} in the link of y_J,
  // built lazily. J = empty keeps the parent complex.
  struct LinkEntry {
    ComplexPtr L;
    FaceFunction comp;        // on L[B'], B' = B relabeled into the link
    const MarginalTable* tb;  // L's marginal table for B'
  };
  std::map<std::pair<uint32_t, int>, LinkEntry> cache;

  double worst = 0.0;
  for (int row : rows) {
    double rhs = 0.0;
    for_each_subset(I, [&](ColorSet J) {
      const double sign = parity_sign(I.size() - J.size());
      const int jrow = (*X->projection_rows(IB, J))[row];
      auto it = cache.find({J.bits(), jrow});
      if (it == cache.end()) {
        LinkEntry e;
        if (J.empty()) {
          e.L = X;
          e.comp = es_component(f, B);
          e.tb = &X->marginal_table(B);
        } else {
          const MarginalTable& tj = X->marginal_table(J);
          SubAssignment xs{J, {tj.row(jrow).begin(), tj.row(jrow).end()}};
          e.L = X->link(xs);
          FaceFunction fl = restrict_function(f, xs, e.L);
          const ColorSet rest = J.complement(d);
          ColorSet Bmapped;
          for (int c : B.members()) Bmapped = Bmapped.with(rest.rank_of(c));
          e.comp = es_component(fl, Bmapped);
          e.tb = &e.L->marginal_table(Bmapped);
        }
        it = cache.emplace(std::make_pair(J.bits(), jrow), std::move(e)).first;
      }
      const LinkEntry& e = it->second;
      auto full = tib.row(row);
      std::vector<int32_t> key(bpos.size());
      for (size_t j = 0; j < bpos.size(); ++j) key[j] = full[bpos[j]];
      const int br = e.tb->find(key);
      if (br < 0)
        throw Error("restriction_identity_check: x_B missing from link support");
      rhs += sign * e.comp[br];
    });
    worst = std::max(worst, std::fabs(lhs[row] - rhs));
  }
  return worst;
}

}  // namespace hdx
