#include "hdx/operators.hpp"

#include <cmath>
#include <mutex>

namespace hdx {

struct Operator::Node {
  enum class Kind { Averaging, Stationary, Lift, Identity, Scale, Sum, Compose };

  Kind kind;
  ComplexPtr X;
  ColorSet dom, cod;
  double scale = 1.0;            // Scale
  std::vector<Operator> kids;    // Scale: 1, Sum: >=1, Compose: 2
  std::string label;

  mutable std::mutex mat_mu;
  mutable std::shared_ptr<const Eigen::MatrixXd> mat;
};

namespace {

using Node = Operator::Node;
using Kind = Node::Kind;

Operator make_node(Kind kind, ComplexPtr X, ColorSet dom, ColorSet cod,
                   std::string label, std::vector<Operator> kids = {},
                   double scale = 1.0) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->X = std::move(X);
  n->dom = dom;
  n->cod = cod;
  n->scale = scale;
  n->kids = std::move(kids);
  n->label = std::move(label);
  return Operator(std::move(n));
}

void require_complex(const ComplexPtr& X, const char* what) {
  if (!X) throw Error(std::string(what) + ": null complex");
}

// Fresh node with the same structure but a new label (nodes hold a mutex and
// cannot be copied wholesale).
Operator relabel(const Operator& op, std::string label) {
  const Node& n = *op.node();
  return make_node(n.kind, n.X, n.dom, n.cod, std::move(label), n.kids, n.scale);
}

}  // namespace

const ComplexPtr& Operator::complex() const {
  if (!node_) throw Error("empty operator");
  return node_->X;
}

ColorSet Operator::domain() const {
  if (!node_) throw Error("empty operator");
  return node_->dom;
}

ColorSet Operator::codomain() const {
  if (!node_) throw Error("empty operator");
  return node_->cod;
}

std::string Operator::signature() const {
  if (!node_) return "<empty>";
  return node_->label;
}

// ---- builders ---------------------------------------------------------------

Operator averaging(ComplexPtr X, ColorSet A, ColorSet T) {
  require_complex(X, "averaging");
  X->check_colors(A, "averaging");
  X->check_colors(T, "averaging");
  std::string label = "E[" + A.str() + "->" + T.str() + "]";
  return make_node(Kind::Averaging, std::move(X), A, T, std::move(label));
}

Operator projection_E(ComplexPtr X, ColorSet T) {
  require_complex(X, "projection_E");
  const ColorSet all = ColorSet::all(X->dimension());
  std::string label = "E_" + T.str();
  return make_node(Kind::Averaging, std::move(X), all, T, std::move(label));
}

Operator swap_walk(ComplexPtr X, ColorSet S, ColorSet T) {
  require_complex(X, "swap_walk");
  if (S.empty() || T.empty()) throw Error("swap_walk: S and T must be nonempty");
  if (S.intersects(T)) throw Error("swap_walk: S and T must be disjoint");
  X->check_colors(S | T, "swap_walk");
  std::string label = "A[" + S.str() + "->" + T.str() + "]";
  return make_node(Kind::Averaging, std::move(X), S, T, std::move(label));
}

Operator stationary(ComplexPtr X, ColorSet S, ColorSet T) {
  require_complex(X, "stationary");
  X->check_colors(S | T, "stationary");
  std::string label = "Pi[" + S.str() + "->" + T.str() + "]";
  return make_node(Kind::Stationary, std::move(X), S, T, std::move(label));
}

Operator lift(ComplexPtr X, ColorSet S, ColorSet A) {
  require_complex(X, "lift");
  if (!S.subset_of(A)) throw Error("lift: S must be a subset of A");
  X->check_colors(A, "lift");
  std::string label = "Lift[" + S.str() + "->" + A.str() + "]";
  return make_node(Kind::Lift, std::move(X), S, A, std::move(label));
}

Operator identity(ComplexPtr X, ColorSet S) {
  require_complex(X, "identity");
  X->check_colors(S, "identity");
  std::string label = "Id" + S.str();
  return make_node(Kind::Identity, std::move(X), S, S, std::move(label));
}

Operator operator+(const Operator& a, const Operator& b) {
  if (!a.node_ || !b.node_) throw Error("operator+: empty operator");
  if (a.node_->X->id() != b.node_->X->id())
    throw Error("operator+: operands live on different complexes");
  if (a.domain() != b.domain() || a.codomain() != b.codomain())
    throw Error("operator+: shape mismatch");
  std::vector<Operator> kids;
  // Flatten nested sums so deep chains stay cheap to walk.
  for (const Operator* op : {&a, &b}) {
    if (op->node_->kind == Kind::Sum)
      kids.insert(kids.end(), op->node_->kids.begin(), op->node_->kids.end());
    else
      kids.push_back(*op);
  }
  std::string label =
      kids.size() > 4
          ? "Sum(" + std::to_string(kids.size()) + " terms)"
          : "(" + a.signature() + " + " + b.signature() + ")";
  return make_node(Kind::Sum, a.node_->X, a.domain(), a.codomain(),
                   std::move(label), std::move(kids));
}

Operator operator*(double c, const Operator& a) {
  if (!a.node_) throw Error("operator*: empty operator");
  std::string label = format_g17(c) + "*" + a.signature();
  return make_node(Kind::Scale, a.node_->X, a.domain(), a.codomain(),
                   std::move(label), {a}, c);
}

Operator operator-(const Operator& a, const Operator& b) { return a + (-1.0 * b); }

Operator compose(const Operator& a, const Operator& b) {
  if (!a.node_ || !b.node_) throw Error("compose: empty operator");
  if (a.node_->X->id() != b.node_->X->id())
    throw Error("compose: operands live on different complexes");
  if (a.domain() != b.codomain())
    throw Error("compose: domain " + a.domain().str() +
                " does not match codomain " + b.codomain().str());
  std::string label = a.signature() + " o " + b.signature();
  return make_node(Kind::Compose, a.node_->X, b.domain(), a.codomain(),
                   std::move(label), {a, b});
}

Operator noise_operator(ComplexPtr X, const std::vector<double>& r) {
  require_complex(X, "noise_operator");
  const int d = X->dimension();
  if (static_cast<int>(r.size()) != d)
    throw Error("noise_operator: r must have one entry per color");
  const ColorSet all = ColorSet::all(d);
  Operator acc;
  bool have = false;
  for_each_subset(all, [&](ColorSet S) {
    double w = 1.0;
    for (int i = 0; i < d; ++i) w *= S.contains(i) ? r[i] : (1.0 - r[i]);
    if (w == 0.0) return;
    Operator term = compose(lift(X, S, all), projection_E(X, S));
    term = w * term;
    acc = have ? acc + term : term;
    have = true;
  });
  if (!have) acc = 0.0 * identity(X, all);
  std::string label = "T_r[";
  for (int i = 0; i < d; ++i) label += (i ? "," : "") + format_g17(r[i]);
  label += "]";
  return relabel(acc, std::move(label));
}

Operator noise_operator(ComplexPtr X, double rho) {
  require_complex(X, "noise_operator");
  return noise_operator(X, std::vector<double>(X->dimension(), rho));
}

Operator coord_noise(ComplexPtr X, ColorSet S, const std::vector<double>& r) {
  require_complex(X, "coord_noise");
  const int d = X->dimension();
  X->check_colors(S, "coord_noise");
  if (static_cast<int>(r.size()) != d)
    throw Error("coord_noise: r must have one entry per color");
  const ColorSet all = ColorSet::all(d);
  Operator acc;
  bool have = false;
  for_each_subset(S, [&](ColorSet T) {
    double w = 1.0;
    for (int i : S.minus(T).members()) w *= r[i];
    for (int i : T.members()) w *= 1.0 - r[i];
    if (w == 0.0) return;
    const ColorSet keep = all.minus(T);
    Operator term = compose(lift(X, keep, all), projection_E(X, keep));
    term = w * term;
    acc = have ? acc + term : term;
    have = true;
  });
  if (!have) acc = 0.0 * identity(X, all);
  std::string label = "T^" + S.str() + "[";
  for (int i = 0; i < d; ++i) label += (i ? "," : "") + format_g17(r[i]);
  label += "]";
  return relabel(acc, std::move(label));
}

Operator laplacian(ComplexPtr X, int i) {
  require_complex(X, "laplacian");
  const int d = X->dimension();
  if (i < 0 || i >= d) throw Error("laplacian: color out of range");
  const ColorSet all = ColorSet::all(d);
  const ColorSet keep = all.without(i);
  Operator op =
      identity(X, all) - compose(lift(X, keep, all), projection_E(X, keep));
  return relabel(op, "L_" + std::to_string(i));
}

// ---- apply ------------------------------------------------------------------

FaceFunction Operator::apply(const FaceFunction& f) const {
  if (!node_) throw Error("apply: empty operator");
  const Node& n = *node_;
  if (!f.complex() || f.complex()->id() != n.X->id())
    throw Error("apply: function lives on a different complex");
  if (f.domain() != n.dom)
    throw Error("apply: function domain " + f.domain().str() +
                " does not match operator domain " + n.dom.str());

  switch (n.kind) {
    case Kind::Identity:
      return f;
    case Kind::Scale: {
      FaceFunction g = n.kids[0].apply(f);
      g *= n.scale;
      return g;
    }
    case Kind::Sum: {
      FaceFunction acc = n.kids[0].apply(f);
      for (size_t k = 1; k < n.kids.size(); ++k) acc += n.kids[k].apply(f);
      return acc;
    }
    case Kind::Compose:
      return n.kids[0].apply(n.kids[1].apply(f));
    case Kind::Lift:
      return f.lift_to(n.cod);
    case Kind::Stationary: {
      const double m = f.mean();
      return FaceFunction::constant(n.X, n.cod, m);
    }
    case Kind::Averaging: {
      const MarginalTable& ta = n.X->marginal_table(n.dom);
      const MarginalTable& tt = n.X->marginal_table(n.cod);
      std::vector<double> num(tt.rows(), 0.0);
      for (int i = 0; i < n.X->face_count(); ++i)
        num[tt.face_row[i]] += n.X->face_weight(i) * f[ta.face_row[i]];
      for (int r = 0; r < tt.rows(); ++r) num[r] /= tt.weight[r];
      return FaceFunction::on(n.X, n.cod, std::move(num));
    }
  }
  throw Error("apply: unreachable");
}

// ---- materialize ------------------------------------------------------------

const Eigen::MatrixXd& Operator::materialize() const {
  if (!node_) throw Error("materialize: empty operator");
  const Node& n = *node_;
  {
    std::lock_guard<std::mutex> lk(n.mat_mu);
    if (n.mat) return *n.mat;
  }

  const MarginalTable& ta = n.X->marginal_table(n.dom);
  const MarginalTable& tt = n.X->marginal_table(n.cod);
  auto M = std::make_shared<Eigen::MatrixXd>(
      Eigen::MatrixXd::Zero(tt.rows(), ta.rows()));

  switch (n.kind) {
    case Kind::Identity:
      M->setIdentity();
      break;
    case Kind::Scale:
      *M = n.scale * n.kids[0].materialize();
      break;
    case Kind::Sum:
      for (const Operator& k : n.kids) *M += k.materialize();
      break;
    case Kind::Compose:
      *M = n.kids[0].materialize() * n.kids[1].materialize();
      break;
    case Kind::Lift: {
      auto proj = n.X->projection_rows(n.cod, n.dom);
      for (int r = 0; r < tt.rows(); ++r) (*M)(r, (*proj)[r]) = 1.0;
      break;
    }
    case Kind::Stationary:
      for (int s = 0; s < ta.rows(); ++s) M->col(s).setConstant(ta.weight[s]);
      break;
    case Kind::Averaging: {
      for (int i = 0; i < n.X->face_count(); ++i)
        (*M)(tt.face_row[i], ta.face_row[i]) += n.X->face_weight(i);
      for (int r = 0; r < tt.rows(); ++r) M->row(r) /= tt.weight[r];
      break;
    }
  }

  std::lock_guard<std::mutex> lk(n.mat_mu);
  if (!n.mat) n.mat = std::move(M);
  return *n.mat;
}

}  // namespace hdx
