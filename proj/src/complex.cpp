#include "hdx/complex.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "hdx/rng.hpp"

namespace hdx {

namespace {

int lex_compare(std::span<const int32_t> a, std::span<const int32_t> b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

std::string face_str(std::span<const int32_t> a) {
  std::string s = "(";
  for (size_t i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a[i]);
  }
  return s + ")";
}

std::string hash_id(int d, const std::vector<int>& sizes,
                    const std::vector<int32_t>& verts,
                    const std::vector<double>& weights) {
  uint64_t h = fnv1a_u64(static_cast<uint64_t>(d));
  for (int k : sizes) h = fnv1a_u64(static_cast<uint64_t>(k), h);
  for (int32_t v : verts) h = fnv1a_u64(static_cast<uint64_t>(v), h);
  for (double w : weights) {
    uint64_t bits;
    std::memcpy(&bits, &w, sizeof bits);
    h = fnv1a_u64(bits, h);
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "x%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

std::string SubAssignment::str() const {
  std::string s = "[";
  const auto cs = colors.members();
  for (size_t i = 0; i < cs.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(cs[i]) + ":" + std::to_string(values[i]);
  }
  return s + "]";
}

int MarginalTable::find(std::span<const int32_t> key) const {
  if (static_cast<int>(key.size()) != arity) return -1;
  if (arity == 0) return rows() ? 0 : -1;
  int lo = 0, hi = rows();
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (lex_compare(row(mid), key) < 0)
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < rows() && lex_compare(row(lo), key) == 0) return lo;
  return -1;
}

// Shared constructor path: validates, sorts faces lexicographically,
// rejects duplicates, normalizes the measure and computes the content id.
ComplexPtr build_from_rows(int d, std::vector<int> color_sizes,
                           std::vector<int32_t> verts,
                           std::vector<double> weights,
                           bool drop_zero_weights) {
  if (d < 1) throw Error("complex dimension must be at least 1");
  const size_t n_in = weights.size();
  if (verts.size() != n_in * static_cast<size_t>(d))
    throw Error("face storage size does not match weight count");

  // Weight sanity; optionally drop exact zeros (product construction).
  {
    std::vector<int32_t> v2;
    std::vector<double> w2;
    v2.reserve(verts.size());
    w2.reserve(n_in);
    for (size_t i = 0; i < n_in; ++i) {
      const double w = weights[i];
      if (!(std::isfinite(w)))
        throw Error("non-finite face weight");
      if (w < 0.0)
        throw Error("negative weight on face " +
                    face_str({verts.data() + i * d, static_cast<size_t>(d)}));
      if (w == 0.0) {
        if (drop_zero_weights) continue;
        throw Error("nonpositive weight on face " +
                    face_str({verts.data() + i * d, static_cast<size_t>(d)}));
      }
      w2.push_back(w);
      v2.insert(v2.end(), verts.begin() + i * d, verts.begin() + (i + 1) * d);
    }
    verts = std::move(v2);
    weights = std::move(w2);
  }
  const size_t n = weights.size();
  if (n == 0) throw Error("complex has no faces with positive weight");

  // Ground set sizes: validate or infer.
  if (!color_sizes.empty()) {
    if (static_cast<int>(color_sizes.size()) != d)
      throw Error("color size list does not match dimension");
    for (size_t i = 0; i < n; ++i)
      for (int c = 0; c < d; ++c) {
        const int32_t v = verts[i * d + c];
        if (v < 0 || v >= color_sizes[c])
          throw Error("vertex id " + std::to_string(v) + " out of range for color " +
                      std::to_string(c));
      }
  } else {
    color_sizes.assign(d, 1);
    for (size_t i = 0; i < n; ++i)
      for (int c = 0; c < d; ++c) {
        const int32_t v = verts[i * d + c];
        if (v < 0) throw Error("negative vertex id");
        color_sizes[c] = std::max(color_sizes[c], v + 1);
      }
  }

  // Canonical order.
  std::vector<int32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto face_at = [&](int32_t i) {
    return std::span<const int32_t>(verts.data() + static_cast<size_t>(i) * d,
                                    static_cast<size_t>(d));
  };
  std::sort(order.begin(), order.end(), [&](int32_t a, int32_t b) {
    return lex_compare(face_at(a), face_at(b)) < 0;
  });
  std::vector<int32_t> sv(n * d);
  std::vector<double> sw(n);
  for (size_t i = 0; i < n; ++i) {
    std::copy_n(verts.begin() + static_cast<size_t>(order[i]) * d, d,
                sv.begin() + i * d);
    sw[i] = weights[order[i]];
  }
  for (size_t i = 1; i < n; ++i) {
    if (lex_compare({sv.data() + (i - 1) * d, static_cast<size_t>(d)},
                    {sv.data() + i * d, static_cast<size_t>(d)}) == 0)
      throw Error("duplicate face " +
                  face_str({sv.data() + i * d, static_cast<size_t>(d)}));
  }

  double total = 0.0;
  for (double w : sw) total += w;
  if (!(total > 0.0)) throw Error("total weight must be positive");
  // Normalize until the mass sums to exactly 1.0, so that an already
  // canonical weight vector passes through untouched and serialization
  // round trips are bit-stable.
  size_t heaviest = 0;
  for (size_t i = 1; i < n; ++i)
    if (sw[i] > sw[heaviest]) heaviest = i;
  for (int pass = 0; pass < 8; ++pass) {
    double s = 0.0;
    for (double w : sw) s += w;
    if (s == 1.0) break;
    if (pass < 2)
      for (double& w : sw) w /= s;
    else
      sw[heaviest] -= s - 1.0;
  }

  auto X = std::make_shared<PartiteComplex>();
  auto* raw = X.get();
  raw->d_ = d;
  raw->color_sizes_ = std::move(color_sizes);
  raw->verts_ = std::move(sv);
  raw->weights_ = std::move(sw);
  raw->correction_ = total;
  raw->renormalized_ = std::fabs(total - 1.0) > 1e-6;
  raw->id_ = hash_id(raw->d_, raw->color_sizes_, raw->verts_, raw->weights_);
  return X;
}

ComplexPtr build_explicit(
    const std::vector<std::pair<std::vector<int32_t>, double>>& faces,
    const std::vector<int>* color_sizes) {
  if (faces.empty()) throw Error("build_explicit: empty face list");
  const int d = static_cast<int>(faces.front().first.size());
  std::vector<int32_t> verts;
  verts.reserve(faces.size() * d);
  std::vector<double> weights;
  weights.reserve(faces.size());
  for (const auto& [assignment, w] : faces) {
    if (static_cast<int>(assignment.size()) != d)
      throw Error("build_explicit: inconsistent face arity");
    verts.insert(verts.end(), assignment.begin(), assignment.end());
    weights.push_back(w);
  }
  return build_from_rows(d, color_sizes ? *color_sizes : std::vector<int>{},
                         std::move(verts), std::move(weights),
                         /*drop_zero_weights=*/false);
}

ComplexPtr build_product(const std::vector<std::vector<double>>& marginals) {
  const int d = static_cast<int>(marginals.size());
  if (d < 1) throw Error("build_product: need at least one color");
  size_t count = 1;
  for (const auto& m : marginals) {
    if (m.empty()) throw Error("build_product: empty marginal");
    for (double p : m)
      if (!(p >= 0.0) || !std::isfinite(p))
        throw Error("build_product: marginal probabilities must be >= 0");
    count *= m.size();
    if (count > 4000000) throw Error("build_product: support too large");
  }
  std::vector<int32_t> verts;
  std::vector<double> weights;
  std::vector<int32_t> idx(d, 0);
  while (true) {
    double w = 1.0;
    for (int c = 0; c < d; ++c) w *= marginals[c][idx[c]];
    if (w > 0.0) {
      for (int c = 0; c < d; ++c) verts.push_back(idx[c]);
      weights.push_back(w);
    }
    int c = d - 1;
    while (c >= 0 && ++idx[c] == static_cast<int32_t>(marginals[c].size())) {
      idx[c] = 0;
      --c;
    }
    if (c < 0) break;
  }
  std::vector<int> sizes(d);
  for (int c = 0; c < d; ++c) sizes[c] = static_cast<int>(marginals[c].size());
  return build_from_rows(d, std::move(sizes), std::move(verts),
                         std::move(weights), /*drop_zero_weights=*/true);
}

ComplexPtr perturb(const PartiteComplex& X, double eps, uint64_t seed) {
  if (!(eps >= 0.0 && eps < 1.0)) throw Error("perturb: eps must be in [0,1)");
  Rng rng(mix_seed(seed, fnv1a(X.id())));
  std::vector<double> w(X.face_count());
  for (int i = 0; i < X.face_count(); ++i)
    w[i] = X.face_weight(i) * (1.0 + rng.uniform(-eps, eps));
  std::vector<int32_t> verts(X.face_count() * X.dimension());
  for (int i = 0; i < X.face_count(); ++i) {
    auto f = X.face(i);
    std::copy(f.begin(), f.end(), verts.begin() + static_cast<size_t>(i) * X.dimension());
  }
  return build_from_rows(X.dimension(), X.color_sizes(), std::move(verts),
                         std::move(w), /*drop_zero_weights=*/false);
}

ComplexPtr embed_symmetrized(
    const std::vector<std::pair<std::vector<int32_t>, double>>& sets) {
  if (sets.empty()) throw Error("embed_symmetrized: empty set system");
  const int d = static_cast<int>(sets.front().first.size());
  if (d < 1 || d > 8) throw Error("embed_symmetrized: need 1 <= d <= 8");
  double dfact = 1.0;
  for (int i = 2; i <= d; ++i) dfact *= i;

  int32_t universe = 0;
  std::vector<std::vector<int32_t>> canon;
  canon.reserve(sets.size());
  for (const auto& [set, w] : sets) {
    if (static_cast<int>(set.size()) != d)
      throw Error("embed_symmetrized: inconsistent set size");
    if (!(w > 0.0)) throw Error("embed_symmetrized: weights must be positive");
    std::vector<int32_t> s = set;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw Error("embed_symmetrized: set " + face_str(std::span<const int32_t>(s)) +
                  " has a repeated vertex");
    for (int32_t v : s) {
      if (v < 0) throw Error("embed_symmetrized: negative vertex id");
      universe = std::max(universe, v + 1);
    }
    canon.push_back(std::move(s));
  }
  {
    auto sorted = canon;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw Error("embed_symmetrized: duplicate set in input");
  }

  std::vector<int32_t> verts;
  std::vector<double> weights;
  for (size_t i = 0; i < canon.size(); ++i) {
    std::vector<int32_t> perm = canon[i];
    const double w = sets[i].second / dfact;
    do {
      verts.insert(verts.end(), perm.begin(), perm.end());
      weights.push_back(w);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return build_from_rows(d, std::vector<int>(d, universe), std::move(verts),
                         std::move(weights), /*drop_zero_weights=*/false);
}

ComplexPtr tensor_power(const PartiteComplex& X, int t, int max_support) {
  if (t < 1) throw Error("tensor_power: t must be >= 1");
  double projected = 1.0;
  for (int i = 0; i < t; ++i) projected *= X.face_count();
  if (projected > max_support)
    throw Error("tensor_power: support " + std::to_string(projected) +
                " exceeds cap " + std::to_string(max_support));
  const int d = X.dimension(), n = X.face_count();
  const int D = d * t;
  std::vector<int32_t> verts;
  std::vector<double> weights;
  std::vector<int> idx(t, 0);
  while (true) {
    double w = 1.0;
    for (int b = 0; b < t; ++b) w *= X.face_weight(idx[b]);
    for (int b = 0; b < t; ++b) {
      auto f = X.face(idx[b]);
      verts.insert(verts.end(), f.begin(), f.end());
    }
    weights.push_back(w);
    int b = t - 1;
    while (b >= 0 && ++idx[b] == n) {
      idx[b] = 0;
      --b;
    }
    if (b < 0) break;
  }
  std::vector<int> sizes;
  sizes.reserve(D);
  for (int b = 0; b < t; ++b)
    sizes.insert(sizes.end(), X.color_sizes().begin(), X.color_sizes().end());
  return build_from_rows(D, std::move(sizes), std::move(verts),
                         std::move(weights), /*drop_zero_weights=*/false);
}

void PartiteComplex::check_colors(ColorSet S, const char* what) const {
  if (!S.subset_of(ColorSet::all(d_)))
    throw Error(std::string(what) + ": colors " + S.str() +
                " outside [" + std::to_string(d_) + "]");
}

const MarginalTable& PartiteComplex::marginal_table(ColorSet S) const {
  check_colors(S, "marginal_table");
  {
    std::lock_guard<std::mutex> lk(cache_mu_);
    auto it = tables_.find(S.bits());
    if (it != tables_.end()) return *it->second;
  }

  auto tab = std::make_shared<MarginalTable>();
  tab->colors = S;
  const auto cols = S.members();
  const int k = static_cast<int>(cols.size());
  tab->arity = k;
  const int n = face_count();

  if (k == 0) {
    double total = 0.0;
    for (double w : weights_) total += w;
    tab->weight.assign(1, total);
    tab->face_row.assign(n, 0);
  } else {
    std::vector<int32_t> keys(static_cast<size_t>(n) * k);
    for (int i = 0; i < n; ++i) {
      auto f = face(i);
      for (int j = 0; j < k; ++j) keys[static_cast<size_t>(i) * k + j] = f[cols[j]];
    }
    std::vector<int32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto key_at = [&](int32_t i) {
      return std::span<const int32_t>(keys.data() + static_cast<size_t>(i) * k,
                                      static_cast<size_t>(k));
    };
    std::sort(order.begin(), order.end(), [&](int32_t a, int32_t b) {
      const int c = lex_compare(key_at(a), key_at(b));
      return c != 0 ? c < 0 : a < b;
    });
    tab->face_row.assign(n, -1);
    for (int i = 0; i < n; ++i) {
      const int32_t fi = order[i];
      if (i == 0 || lex_compare(key_at(order[i - 1]), key_at(fi)) != 0) {
        tab->assign.insert(tab->assign.end(), key_at(fi).begin(), key_at(fi).end());
        tab->weight.push_back(0.0);
      }
      tab->face_row[fi] = tab->rows() - 1;
      tab->weight.back() += weights_[fi];
    }
  }

  std::lock_guard<std::mutex> lk(cache_mu_);
  auto [it, inserted] = tables_.emplace(S.bits(), std::move(tab));
  return *it->second;
}

int PartiteComplex::find_face(std::span<const int32_t> assignment) const {
  return marginal_table(ColorSet::all(d_)).find(assignment);
}

bool PartiteComplex::contains(const SubAssignment& xs) const {
  check_colors(xs.colors, "contains");
  if (static_cast<int>(xs.values.size()) != xs.colors.size())
    throw Error("sub-assignment arity does not match its color set");
  return marginal_table(xs.colors).find(xs.values) >= 0;
}

std::shared_ptr<const std::vector<int32_t>> PartiteComplex::projection_rows(
    ColorSet A, ColorSet S) const {
  if (!S.subset_of(A)) throw Error("projection_rows: S must be a subset of A");
  const uint64_t key = (static_cast<uint64_t>(A.bits()) << 32) | S.bits();
  const bool cache = d_ <= 6;
  if (cache) {
    std::lock_guard<std::mutex> lk(cache_mu_);
    auto it = projections_.find(key);
    if (it != projections_.end()) return it->second;
  }

  const MarginalTable& ta = marginal_table(A);
  const MarginalTable& ts = marginal_table(S);
  auto out = std::make_shared<std::vector<int32_t>>(ta.rows());
  const auto sub = S.members();
  std::vector<int> pos(sub.size());
  for (size_t j = 0; j < sub.size(); ++j) pos[j] = A.rank_of(sub[j]);
  std::vector<int32_t> buf(sub.size());
  for (int r = 0; r < ta.rows(); ++r) {
    auto row = ta.row(r);
    for (size_t j = 0; j < sub.size(); ++j) buf[j] = row[pos[j]];
    const int sr = ts.find(buf);
    if (sr < 0) throw Error("internal: marginal projection missing from support");
    (*out)[r] = sr;
  }

  if (cache) {
    std::lock_guard<std::mutex> lk(cache_mu_);
    projections_.emplace(key, out);
  }
  return out;
}

ComplexPtr PartiteComplex::link(const SubAssignment& xs) const {
  check_colors(xs.colors, "link");
  if (static_cast<int>(xs.values.size()) != xs.colors.size())
    throw Error("link: sub-assignment arity does not match its color set");
  const ColorSet rest = xs.colors.complement(d_);
  if (rest.empty()) throw Error("link: conditioning on all colors leaves nothing");

  const MarginalTable& tab = marginal_table(xs.colors);
  const int row = tab.find(xs.values);
  if (row < 0) throw Error("link: conditioning " + xs.str() + " is infeasible");
  const double mass = tab.weight[row];

  const auto keep = rest.members();
  std::vector<int32_t> verts;
  std::vector<double> weights;
  for (int i = 0; i < face_count(); ++i) {
    if (tab.face_row[i] != row) continue;
    auto f = face(i);
    for (int c : keep) verts.push_back(f[c]);
    weights.push_back(weights_[i] / mass);
  }
  std::vector<int> sizes;
  sizes.reserve(keep.size());
  for (int c : keep) sizes.push_back(color_sizes_[c]);
  return build_from_rows(static_cast<int>(keep.size()), std::move(sizes),
                         std::move(verts), std::move(weights),
                         /*drop_zero_weights=*/false);
}

MeasureView marginal(ComplexPtr X, ColorSet S) {
  if (!X) throw Error("marginal: null complex");
  MeasureView v;
  v.table = &X->marginal_table(S);
  v.X = std::move(X);
  v.colors = S;
  return v;
}

// ---- FaceFunction ----------------------------------------------------------

FaceFunction FaceFunction::on(ComplexPtr X, ColorSet S, std::vector<double> values) {
  if (!X) throw Error("FaceFunction: null complex");
  const MarginalTable& tab = X->marginal_table(S);
  if (static_cast<int>(values.size()) != tab.rows())
    throw Error("FaceFunction: expected " + std::to_string(tab.rows()) +
                " values on X" + S.str() + ", got " + std::to_string(values.size()));
  FaceFunction f;
  f.table_ = &tab;
  f.X_ = std::move(X);
  f.domain_ = S;
  f.values_ = std::move(values);
  return f;
}

FaceFunction FaceFunction::constant(ComplexPtr X, ColorSet S, double c) {
  const int rows = X->marginal_table(S).rows();
  return on(std::move(X), S, std::vector<double>(rows, c));
}

FaceFunction FaceFunction::basis(ComplexPtr X, ColorSet S, int row) {
  const int rows = X->marginal_table(S).rows();
  if (row < 0 || row >= rows) throw Error("basis: row out of range");
  std::vector<double> v(rows, 0.0);
  v[row] = 1.0;
  return on(std::move(X), S, std::move(v));
}

double FaceFunction::at(const SubAssignment& xs) const {
  if (xs.colors != domain_)
    throw Error("evaluation colors " + xs.colors.str() + " do not match domain " +
                domain_.str());
  const int row = table_->find(xs.values);
  if (row < 0) throw Error("evaluation outside support: " + xs.str());
  return values_[row];
}

double FaceFunction::mean() const {
  double acc = 0.0;
  for (int r = 0; r < size(); ++r) acc += table_->weight[r] * values_[r];
  return acc;
}

double FaceFunction::norm(double q) const {
  if (!(q >= 1.0)) throw Error("norm: q must be >= 1");
  double acc = 0.0;
  for (int r = 0; r < size(); ++r)
    acc += table_->weight[r] * std::pow(std::fabs(values_[r]), q);
  return std::pow(acc, 1.0 / q);
}

double FaceFunction::norm2_sq() const {
  double acc = 0.0;
  for (int r = 0; r < size(); ++r)
    acc += table_->weight[r] * values_[r] * values_[r];
  return acc;
}

double FaceFunction::inner(const FaceFunction& g) const {
  require_same_space(g, "inner");
  double acc = 0.0;
  for (int r = 0; r < size(); ++r)
    acc += table_->weight[r] * values_[r] * g.values_[r];
  return acc;
}

double FaceFunction::sup_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::fabs(v));
  return m;
}

FaceFunction FaceFunction::lift_to(ColorSet A) const {
  if (A == domain_) return *this;
  if (!domain_.subset_of(A))
    throw Error("lift_to: target colors " + A.str() + " do not contain " +
                domain_.str());
  auto proj = X_->projection_rows(A, domain_);
  std::vector<double> v(proj->size());
  for (size_t r = 0; r < proj->size(); ++r) v[r] = values_[(*proj)[r]];
  return on(X_, A, std::move(v));
}

void FaceFunction::require_same_space(const FaceFunction& g, const char* what) const {
  if (!X_ || !g.X_) throw Error(std::string(what) + ": empty function");
  if (X_->id() != g.X_->id())
    throw Error(std::string(what) + ": functions live on different complexes");
  if (domain_ != g.domain_)
    throw Error(std::string(what) + ": domain mismatch " + domain_.str() + " vs " +
                g.domain_.str());
}

FaceFunction& FaceFunction::operator+=(const FaceFunction& g) {
  require_same_space(g, "operator+");
  for (int r = 0; r < size(); ++r) values_[r] += g.values_[r];
  return *this;
}

FaceFunction& FaceFunction::operator-=(const FaceFunction& g) {
  require_same_space(g, "operator-");
  for (int r = 0; r < size(); ++r) values_[r] -= g.values_[r];
  return *this;
}

FaceFunction& FaceFunction::operator*=(double c) {
  for (double& v : values_) v *= c;
  return *this;
}

FaceFunction FaceFunction::pointwise_mul(const FaceFunction& g) const {
  require_same_space(g, "pointwise_mul");
  std::vector<double> v(values_);
  for (int r = 0; r < size(); ++r) v[r] *= g.values_[r];
  return on(X_, domain_, std::move(v));
}

std::vector<int32_t> merge_assignment(int d, const SubAssignment& xs,
                                      std::span<const int32_t> rest) {
  std::vector<int32_t> full(d);
  const auto cs = xs.colors.members();
  for (size_t j = 0; j < cs.size(); ++j) full[cs[j]] = xs.values[j];
  const auto rs = xs.colors.complement(d).members();
  if (rs.size() != rest.size())
    throw Error("merge_assignment: remainder arity mismatch");
  for (size_t j = 0; j < rs.size(); ++j) full[rs[j]] = rest[j];
  return full;
}

FaceFunction restrict_function(const FaceFunction& f, const SubAssignment& xs,
                               ComplexPtr link_complex) {
  const ComplexPtr& X = f.complex();
  const int d = X->dimension();
  if (f.domain() != ColorSet::all(d))
    throw Error("restrict_function: f must live on the top faces");
  ComplexPtr L = link_complex ? std::move(link_complex) : X->link(xs);
  const ColorSet rest_all = ColorSet::all(L->dimension());
  std::vector<double> vals(L->face_count());
  for (int r = 0; r < L->face_count(); ++r) {
    const auto full = merge_assignment(d, xs, L->face(r));
    const int idx = X->find_face(full);
    if (idx < 0)
      throw Error("restrict_function: link face missing from parent support");
    vals[r] = f.at_face(idx);
  }
  return FaceFunction::on(std::move(L), rest_all, std::move(vals));
}

}  // namespace hdx
