// File formats, builtins, brute-force oracles, reports, and the suite
// runner.

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "hdx/builtins.hpp"
#include "hdx/expansion.hpp"
#include "hdx/io.hpp"
#include "hdx/operators.hpp"
#include "hdx/oracle.hpp"
#include "hdx/report.hpp"
#include "hdx/rng.hpp"
#include "hdx/suite.hpp"
#include "hdx/util.hpp"
#include "support.hpp"

using namespace hdx;

namespace {

struct TempDir {
  std::filesystem::path dir;

  TempDir() {
    dir = std::filesystem::temp_directory_path() /
          ("hdx_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
  }
  ~TempDir() { std::filesystem::remove_all(dir); }

  std::string path(const std::string& name) const {
    return (dir / name).string();
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

FaceFunction gauss_fn(const ComplexPtr& X, uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(X->face_count());
  for (double& x : v) x = rng.normal();
  return FaceFunction::on(X, ColorSet::all(X->dimension()), std::move(v));
}

}  // namespace

TEST_CASE("complex files round-trip bit-exactly") {
  TempDir tmp;
  ComplexPtr X = gen_random_sparse({3, 2, 4}, 14, 99);
  const std::string path = tmp.path("x.cx");
  save_complex(*X, path);
  ComplexPtr Y = load_complex(path);
  CHECK(Y->id() == X->id());
  REQUIRE(Y->face_count() == X->face_count());
  for (int i = 0; i < X->face_count(); ++i) {
    CHECK(Y->face_weight(i) == X->face_weight(i));
    CHECK(std::equal(X->face(i).begin(), X->face(i).end(),
                     Y->face(i).begin()));
  }
  // The canonical writer is a fixed point.
  const std::string again = tmp.path("y.cx");
  save_complex(*Y, again);
  CHECK(slurp(path) == slurp(again));
}

TEST_CASE("complex files accept comments and report line numbers") {
  TempDir tmp;
  const std::string path = tmp.path("c.cx");
  spit(path,
       "# comment\n"
       "\n"
       "2 2 2   # header\n"
       "0 0 0.5\n"
       "1 1 0.5\n");
  ComplexPtr X = load_complex(path);
  CHECK(X->dimension() == 2);
  CHECK(X->face_count() == 2);
  CHECK(X->face_weight(0) == 0.5);

  spit(path, "2 2 2\n0 0 0.5\n1 oops 0.5\n");
  CHECK_THROWS_WITH_AS(load_complex(path),
                       doctest::Contains(":3: expected an integer"), Error);
  spit(path, "2 2 2\n0 0 0.5\n1 1 -0.5\n");
  CHECK_THROWS_WITH_AS(load_complex(path),
                       doctest::Contains(":3: weight must be positive"),
                       Error);
  spit(path, "2 2 2\n0 2 1\n");
  CHECK_THROWS_WITH_AS(load_complex(path), doctest::Contains("vertex id 2"),
                       Error);
  spit(path, "# nothing\n");
  CHECK_THROWS_WITH_AS(load_complex(path), doctest::Contains("no data lines"),
                       Error);
  CHECK_THROWS_WITH_AS(load_complex(tmp.path("absent.cx")),
                       doctest::Contains("cannot open"), Error);
}

TEST_CASE("function files round-trip and validate their support") {
  TempDir tmp;
  ComplexPtr X = gen_random_sparse({2, 3}, 5, 4);
  FaceFunction f = gauss_fn(X, 11);
  const std::string path = tmp.path("f.fn");
  save_function(f, path);
  FaceFunction g = load_function(path, X);
  for (int i = 0; i < X->face_count(); ++i) CHECK(g.at_face(i) == f.at_face(i));
  const std::string again = tmp.path("g.fn");
  save_function(g, again);
  CHECK(slurp(path) == slurp(again));

  // Unknown face, duplicate, and missing coverage all carry positions.
  std::string text = slurp(path);
  spit(path, text + "0 0 1.25\n");
  const bool absent = X->find_face(std::vector<int32_t>{0, 0}) < 0;
  if (absent) {
    CHECK_THROWS_WITH_AS(load_function(path, X),
                         doctest::Contains("not in the support"), Error);
  } else {
    CHECK_THROWS_WITH_AS(load_function(path, X),
                         doctest::Contains("duplicate value"), Error);
  }
  std::string first_line = text.substr(0, text.find('\n') + 1);
  spit(path, first_line + first_line);
  CHECK_THROWS_WITH_AS(load_function(path, X),
                       doctest::Contains("duplicate value"), Error);
  spit(path, first_line);
  CHECK_THROWS_WITH_AS(load_function(path, X),
                       doctest::Contains("missing value"), Error);
}

TEST_CASE("builtins match truth tables on the cube") {
  ComplexPtr X = gen_uniform_cube(3);
  auto by_face = [&](const FaceFunction& f) {
    std::vector<double> v(X->face_count());
    for (int i = 0; i < X->face_count(); ++i) v[i] = f.at_face(i);
    return v;
  };
  FaceFunction dict = builtin_function(X, "dictator:1");
  FaceFunction par = builtin_function(X, "parity");
  FaceFunction maj = builtin_function(X, "majority:0,1,2");
  FaceFunction ind = builtin_function(X, "indicator:2,0");
  FaceFunction conj = builtin_function(X, "and:0,2");
  for (int i = 0; i < X->face_count(); ++i) {
    auto x = X->face(i);
    auto pm = [&](int c) { return x[c] == 1 ? 1.0 : -1.0; };
    CHECK(by_face(dict)[i] == pm(1));
    CHECK(by_face(par)[i] == pm(0) * pm(1) * pm(2));
    CHECK(by_face(maj)[i] == (pm(0) + pm(1) + pm(2) > 0 ? 1.0 : -1.0));
    CHECK(by_face(ind)[i] == (x[2] == 0 ? 1.0 : 0.0));
    CHECK(by_face(conj)[i] == (x[0] == 1 && x[2] == 1 ? 1.0 : 0.0));
  }
  FaceFunction r1 = builtin_function(X, "random_pm1:5");
  FaceFunction r2 = builtin_function(X, "random_pm1:5");
  for (int i = 0; i < X->face_count(); ++i) {
    CHECK(r1.at_face(i) == r2.at_face(i));
    CHECK(std::fabs(r1.at_face(i)) == 1.0);
  }

  CHECK_THROWS_WITH_AS(builtin_function(X, "dictator"),
                       doctest::Contains("exactly one coordinate"), Error);
  CHECK_THROWS_WITH_AS(builtin_function(X, "majority:0,1"),
                       doctest::Contains("odd number"), Error);
  CHECK_THROWS_WITH_AS(builtin_function(X, "unknown_fn"),
                       doctest::Contains("unknown name"), Error);
  ComplexPtr T = make_complex("product:2,3,2,9");
  CHECK_THROWS_WITH_AS(builtin_function(T, "parity"),
                       doctest::Contains("not binary"), Error);
}

TEST_CASE("generator specs are deterministic and validated") {
  CHECK(make_complex("cube:3")->id() == gen_uniform_cube(3)->id());
  CHECK(make_complex("biased:2,0.25")->id() == gen_biased_cube(2, 0.25)->id());
  CHECK(make_complex("product:2,3,4,17")->id() ==
        make_complex("product:2,3,4,17")->id());
  CHECK(make_complex("sparse:3,2,2,2,6,8")->id() ==
        make_complex("sparse:3,2,2,2,6,8")->id());
  CHECK(make_complex("product:2,3,4,17")->id() !=
        make_complex("product:2,3,4,18")->id());

  ComplexPtr near = make_complex("nearproduct:2,2,3,0.05,5");
  CHECK(near->dimension() == 2);
  double mass = 0.0;
  for (int i = 0; i < near->face_count(); ++i) mass += near->face_weight(i);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_WITH_AS(make_complex("wat:3"),
                       doctest::Contains("unknown generator"), Error);
  CHECK_THROWS_WITH_AS(make_complex("cube"),
                       doctest::Contains("expected cube:d"), Error);
  CHECK_THROWS_WITH_AS(make_complex("biased:2,1.5"),
                       doctest::Contains("strictly between"), Error);
  CHECK_THROWS_WITH_AS(make_complex("product:2,3,4"),
                       doctest::Contains("ground-set sizes plus"), Error);
}

TEST_CASE("norm oracle agrees with the library norms") {
  ComplexPtr X = gen_random_sparse({3, 2, 3}, 11, 21);
  FaceFunction f = gauss_fn(X, 33);
  for (double q : {1.0, 2.0, 3.0, 4.0 / 3.0, 5.5})
    CHECK(oracle_norm(f, q) == doctest::Approx(f.norm(q)).epsilon(1e-12));
  CHECK_THROWS_AS(oracle_norm(f, 0.5), Error);
}

TEST_CASE("dense operator-norm oracle brackets and hits known values") {
  // Two-point chain: every q-norm of A - Pi equals |1 - 2a|.
  for (double a : {0.1, 0.3}) {
    ComplexPtr X = build_explicit({{{0, 0}, (1 - a) / 2},
                                   {{0, 1}, a / 2},
                                   {{1, 0}, a / 2},
                                   {{1, 1}, (1 - a) / 2}});
    Operator op = swap_walk(X, ColorSet::single(0), ColorSet::single(1)) -
                  stationary(X, ColorSet::single(0), ColorSet::single(1));
    for (double q : {2.0, 3.0, 4.0 / 3.0}) {
      const double v = oracle_opnorm_dense(op.materialize(),
                                           X->marginal_table(ColorSet::single(1)).weight,
                                           X->marginal_table(ColorSet::single(0)).weight,
                                           q);
      CHECK(v == doctest::Approx(std::fabs(1 - 2 * a)).epsilon(1e-9));
    }
  }
  // Random small walk: oracle stays inside the ascent/interpolation bracket.
  ComplexPtr X = gen_random_sparse({3, 3}, 8, 5);
  Operator op = swap_walk(X, ColorSet::single(0), ColorSet::single(1)) -
                stationary(X, ColorSet::single(0), ColorSet::single(1));
  const double q = 3.0;
  const double v = oracle_opnorm_dense(
      op.materialize(), X->marginal_table(ColorSet::single(1)).weight,
      X->marginal_table(ColorSet::single(0)).weight, q);
  const double lower = opnorm_q_lower(op, q).lower;
  const double upper = opnorm_q_interp_upper(op, q);
  CHECK(lower <= v + 1e-8);
  CHECK(v <= upper + 1e-8);
}

TEST_CASE("reports serialize deterministically") {
  CheckRecord rec;
  rec.name = "demo/one";
  rec.ref = "a \"quoted\" statement\\with backslash";
  rec.lhs = 0.1;
  rec.rhs = 0.25;
  rec.slack = 0.125;
  rec.status = CheckStatus::Pass;
  rec.params = "n=3";
  rec.seed = 42;
  rec.complex_id = "xdeadbeef";
  rec.message = "line\nbreak";
  rec.runtime_ms = 12.5;
  CheckRecord fail = rec;
  fail.name = "demo/two";
  fail.status = CheckStatus::Fail;

  const std::string a = report_json({rec, fail});
  const std::string b = report_json({rec, fail});
  CHECK(a == b);
  CHECK(a.find("\\\"quoted\\\"") != std::string::npos);
  CHECK(a.find("\\\\with") != std::string::npos);
  CHECK(a.find("line\\nbreak") != std::string::npos);
  CHECK(a.find("runtime_ms") == std::string::npos);
  CHECK(report_json({rec}, true).find("runtime_ms") != std::string::npos);

  const std::string csv = report_csv({rec, fail});
  CHECK(csv == "name,status,slack\n"
               "demo/one,pass,0.125\n"
               "demo/two,fail,0.125\n");
}

TEST_CASE("suite runner selects, seeds, and reruns deterministically") {
  const std::vector<CheckInfo> infos = registered_checks();
  CHECK(infos.size() >= 35);
  bool has_fixture = false;
  for (const CheckInfo& info : infos)
    has_fixture = has_fixture || info.name == "fixture/intentional-failure";
  CHECK(has_fixture);

  SuiteOptions opts;
  opts.checks = {"es/decomposition-sum", "product/parseval"};
  opts.jobs = 1;
  SuiteResult res = run_suite(opts);
  REQUIRE(res.records.size() == 2);
  CHECK(res.records[0].name == "es/decomposition-sum");
  CHECK(res.records[1].name == "product/parseval");
  CHECK(res.records[0].status == CheckStatus::Pass);
  CHECK(res.records[1].status == CheckStatus::Pass);
  CHECK(res.records[0].seed != res.records[1].seed);
  CHECK(res.ok());

  SuiteResult rerun = run_suite(opts);
  CHECK(report_json(res.records) == report_json(rerun.records));

  SuiteOptions fixture;
  fixture.checks = {"fixture/intentional-failure"};
  SuiteResult fres = run_suite(fixture);
  CHECK(fres.records[0].status == CheckStatus::Fail);
  CHECK(fres.failed == 1);
  CHECK(!fres.ok());

  SuiteOptions bad;
  bad.checks = {"no/such-check"};
  CHECK_THROWS_WITH_AS(run_suite(bad), doctest::Contains("unknown check"),
                       Error);
}

TEST_CASE("suite writes reports through the atomic writer") {
  TempDir tmp;
  SuiteOptions opts;
  opts.checks = {"core/marginal-consistency"};
  opts.out = tmp.path("report.json");
  opts.csv = tmp.path("report.csv");
  SuiteResult res = run_suite(opts);
  CHECK(res.ok());
  const std::string json = slurp(opts.out);
  CHECK(json == report_json(res.records));
  CHECK(slurp(opts.csv) == report_csv(res.records));
  run_suite(opts);
  CHECK(slurp(opts.out) == json);
}

TEST_CASE("suite config files parse strictly") {
  SuiteOptions opts = suite_options_from_json(
      R"({"checks": ["es/noise-forms"], "seed": 7, "tol": 1e-8,
          "jobs": 2, "include_runtime": true, "out": "a.json",
          "csv": "a.csv"})");
  CHECK(opts.checks == std::vector<std::string>{"es/noise-forms"});
  CHECK(opts.seed == 7);
  CHECK(opts.tol == 1e-8);
  CHECK(opts.jobs == 2);
  CHECK(opts.include_runtime);
  CHECK(opts.out == "a.json");
  CHECK(opts.csv == "a.csv");

  CHECK(suite_options_from_json(R"({"checks": "all"})").checks.empty());
  CHECK_THROWS_WITH_AS(suite_options_from_json("[1]"),
                       doctest::Contains("expected a JSON object"), Error);
  CHECK_THROWS_WITH_AS(suite_options_from_json(R"({"checks": 3})"),
                       doctest::Contains("checks must be"), Error);
  CHECK_THROWS_WITH_AS(suite_options_from_json(R"({"speed": 1})"),
                       doctest::Contains("unknown key 'speed'"), Error);
  CHECK_THROWS_WITH_AS(suite_options_from_json(R"({"seed": "x"})"),
                       doctest::Contains("seed must be"), Error);
  CHECK_THROWS_WITH_AS(suite_options_from_json("{"),
                       doctest::Contains("suite config"), Error);
}

TEST_CASE("the default suite passes end to end") {
  SuiteOptions opts;
  SuiteResult res = run_suite(opts);
  CHECK(res.records.size() >= 34);
  for (const CheckRecord& rec : res.records) {
    CAPTURE(rec.name);
    CHECK(rec.name.rfind("fixture/", 0) != 0);
    CHECK((rec.status == CheckStatus::Pass ||
           rec.status == CheckStatus::Diagnostic));
  }
  CHECK(res.ok());
}
