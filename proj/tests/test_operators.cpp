#include <doctest.h>

#include <cmath>

#include "hdx/operators.hpp"
#include "support.hpp"

using namespace hdx;
using testsup::Key;

TEST_CASE("projection_E agrees with raw conditional means") {
  auto X = testsup::random_sparse_complex(4, {2, 3, 2, 3}, 35, 2024);
  auto f = testsup::random_gauss_function(X, 3);
  for (uint32_t bits = 0; bits < 16; ++bits) {
    ColorSet T(bits);
    auto g = projection_E(X, T).apply(f);
    const MarginalTable& tab = X->marginal_table(T);
    for (int r = 0; r < tab.rows(); ++r) {
      const double raw = testsup::raw_conditional_mean(
          *X, f.values(), T.members(), Key(tab.row(r).begin(), tab.row(r).end()));
      CHECK(g[r] == doctest::Approx(raw).epsilon(1e-11));
    }
  }
}

TEST_CASE("swap walks are adjoint and constant-preserving") {
  auto X = testsup::random_sparse_complex(3, {3, 2, 3}, 14, 88);
  ColorSet S = ColorSet::of({0}), T = ColorSet::of({1, 2});
  auto A = swap_walk(X, S, T);
  auto At = swap_walk(X, T, S);

  auto ones = FaceFunction::constant(X, S, 1.0);
  auto Aones = A.apply(ones);
  for (int r = 0; r < Aones.size(); ++r)
    CHECK(Aones[r] == doctest::Approx(1.0).epsilon(1e-12));

  for (uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed + 10);
    std::vector<double> fv(X->marginal_table(S).rows());
    std::vector<double> gv(X->marginal_table(T).rows());
    for (double& v : fv) v = rng.normal();
    for (double& v : gv) v = rng.normal();
    auto f = FaceFunction::on(X, S, fv);
    auto g = FaceFunction::on(X, T, gv);
    const double lhs = A.apply(f).inner(g);
    const double rhs = f.inner(At.apply(g));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
  }

  CHECK_THROWS_AS(swap_walk(X, ColorSet::of({0, 1}), ColorSet::of({1})), Error);
  CHECK_THROWS_AS(swap_walk(X, ColorSet(), ColorSet::of({1})), Error);
}

TEST_CASE("stationary operator lands on the mean") {
  auto X = testsup::random_sparse_complex(3, {2, 2, 4}, 12, 5);
  auto f = testsup::random_gauss_function(X, 77);
  auto Pi = stationary(X, ColorSet::all(3), ColorSet::of({2}));
  auto g = Pi.apply(f);
  for (int r = 0; r < g.size(); ++r)
    CHECK(g[r] == doctest::Approx(f.mean()).epsilon(1e-12));
}

TEST_CASE("apply matches materialize on basis vectors") {
  auto X = testsup::random_sparse_complex(3, {2, 3, 2}, 11, 6161);
  std::vector<Operator> ops = {
      projection_E(X, ColorSet::of({1})),
      swap_walk(X, ColorSet::of({0}), ColorSet::of({1, 2})),
      stationary(X, ColorSet::of({0}), ColorSet::of({2})),
      noise_operator(X, {0.3, -0.2, 0.8}),
      coord_noise(X, ColorSet::of({0, 2}), {0.5, 0.0, 0.25}),
      laplacian(X, 1),
  };
  for (const auto& op : ops) {
    const Eigen::MatrixXd& M = op.materialize();
    const MarginalTable& dom = X->marginal_table(op.domain());
    REQUIRE(M.cols() == dom.rows());
    for (int s = 0; s < dom.rows(); ++s) {
      auto e = FaceFunction::basis(X, op.domain(), s);
      auto col = op.apply(e);
      for (int r = 0; r < col.size(); ++r)
        CHECK(col[r] == doctest::Approx(M(r, s)).epsilon(1e-12));
    }
  }
}

TEST_CASE("averaging operators contract every q-norm and fix constants") {
  auto X = testsup::random_sparse_complex(4, {2, 2, 3, 2}, 20, 41);
  auto f = testsup::random_gauss_function(X, 12);
  const ColorSet all = ColorSet::all(4);
  std::vector<Operator> ops = {
      projection_E(X, ColorSet::of({0, 2})),
      stationary(X, all, all),
      noise_operator(X, 0.7),
      coord_noise(X, ColorSet::of({1, 3}), {0.0, 0.4, 0.0, 0.9}),
  };
  for (const auto& op : ops) {
    auto ones = FaceFunction::constant(X, op.domain(), 1.0);
    auto g = op.apply(ones);
    for (int r = 0; r < g.size(); ++r)
      CHECK(g[r] == doctest::Approx(1.0).epsilon(1e-12));
    for (double q : {1.0, 4.0 / 3.0, 2.0, 4.0}) {
      auto h = op.apply(f);
      CHECK(h.norm(q) <= f.norm(q) * (1 + 1e-12));
    }
  }
  // mean preservation for noise, including negative entries
  auto T = noise_operator(X, {-0.5, 1.2, 0.3, 0.0});
  CHECK(T.apply(f).mean() == doctest::Approx(f.mean()).epsilon(1e-11));
}

TEST_CASE("coordinate noise on the cube scales characters") {
  auto X = testsup::uniform_cube(2);
  std::vector<double> chi1(4);
  for (int i = 0; i < 4; ++i) chi1[i] = testsup::pm(X->face(i)[0]);
  auto f = FaceFunction::on(X, ColorSet::all(2), chi1);
  const double rho = 0.35;
  auto g = coord_noise(X, ColorSet::of({0}), {rho, 0.0}).apply(f);
  for (int i = 0; i < 4; ++i)
    CHECK(g.at_face(i) == doctest::Approx(rho * testsup::pm(X->face(i)[0])).epsilon(1e-12));
  // noise in the other coordinate leaves chi_0 alone
  auto h = coord_noise(X, ColorSet::of({1}), {0.0, rho}).apply(f);
  for (int i = 0; i < 4; ++i)
    CHECK(h.at_face(i) == doctest::Approx(testsup::pm(X->face(i)[0])).epsilon(1e-12));
}

TEST_CASE("coord_noise singleton is r*Id + (1-r)*E") {
  auto X = testsup::random_sparse_complex(3, {2, 2, 2}, 7, 303);
  const double r = 0.37;
  const ColorSet all = ColorSet::all(3);
  const ColorSet keep = all.without(1);
  auto direct = coord_noise(X, ColorSet::of({1}), {0.0, r, 0.0});
  auto assembled = r * identity(X, all) +
                   (1.0 - r) * compose(lift(X, keep, all), projection_E(X, keep));
  const Eigen::MatrixXd D = direct.materialize();
  const Eigen::MatrixXd A = assembled.materialize();
  CHECK((D - A).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("full-set coordinate noise is the noise operator") {
  auto X = testsup::random_sparse_complex(3, {2, 3, 2}, 13, 11);
  const std::vector<double> r{0.2, -0.4, 0.9};
  const Eigen::MatrixXd A = coord_noise(X, ColorSet::all(3), r).materialize();
  const Eigen::MatrixXd B = noise_operator(X, r).materialize();
  CHECK((A - B).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("matching complex swaps by the identity matrix") {
  auto X = build_explicit({{{0, 0}, 0.5}, {{1, 1}, 0.5}});
  const Eigen::MatrixXd A =
      swap_walk(X, ColorSet::of({0}), ColorSet::of({1})).materialize();
  CHECK(A.rows() == 2);
  CHECK((A - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("products factor: singleton chain equals joint noise, swaps are stationary") {
  auto X = testsup::random_product_complex(3, {2, 3, 2}, 909);
  const std::vector<double> r{0.6, 0.1, 0.8};
  Operator chain = coord_noise(X, ColorSet::of({0}), r);
  chain = compose(chain, coord_noise(X, ColorSet::of({1}), r));
  chain = compose(chain, coord_noise(X, ColorSet::of({2}), r));
  const Eigen::MatrixXd C = chain.materialize();
  const Eigen::MatrixXd T = noise_operator(X, r).materialize();
  CHECK((C - T).cwiseAbs().maxCoeff() < 1e-10);

  auto f = testsup::random_gauss_function(X, 17);
  for (auto [sb, tb] : std::vector<std::pair<uint32_t, uint32_t>>{
           {0b001, 0b010}, {0b001, 0b110}, {0b011, 0b100}}) {
    ColorSet S(sb), T2(tb);
    auto fs = projection_E(X, S).apply(f);
    auto a = swap_walk(X, S, T2).apply(fs);
    auto pi = stationary(X, S, T2).apply(fs);
    for (int rr = 0; rr < a.size(); ++rr)
      CHECK(a[rr] == doctest::Approx(pi[rr]).epsilon(1e-10));
  }
}

TEST_CASE("embedded set system walks equal the non-lazy graph walk") {
  // path graph 0-1-2 with edge weights 1 and 2
  auto X = embed_symmetrized({{{0, 1}, 1.0}, {{1, 2}, 2.0}});
  const Eigen::MatrixXd A =
      swap_walk(X, ColorSet::of({0}), ColorSet::of({1})).materialize();
  // rows/cols indexed by vertex id 0,1,2; walk from vertex v moves along an
  // incident edge with probability proportional to its weight
  Eigen::MatrixXd W(3, 3);
  W << 0, 1, 0, 1. / 3, 0, 2. / 3, 0, 1, 0;
  CHECK(A.rows() == 3);
  CHECK((A - W).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("operator algebra rejects shape and complex mismatches") {
  auto X = testsup::uniform_cube(2);
  auto Y = testsup::uniform_cube(3);
  auto E0 = projection_E(X, ColorSet::of({0}));
  auto E1 = projection_E(X, ColorSet::of({1}));
  CHECK_THROWS_AS(E0 + E1, Error);
  CHECK_THROWS_AS(compose(E0, E0), Error);
  CHECK_THROWS_AS(E0 + projection_E(Y, ColorSet::of({0})), Error);
  auto f3 = testsup::random_gauss_function(Y, 1);
  CHECK_THROWS_AS((void)E0.apply(f3), Error);
}
