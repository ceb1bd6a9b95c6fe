// Command-line front end: generation, certification, decomposition,
// symmetrization, hypercontractivity profiling, booster search, and the
// property suite. All JSON output is canonical (fixed key order, 17
// significant digits) so repeated runs are byte-identical.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hdx/builtins.hpp"
#include "hdx/efron_stein.hpp"
#include "hdx/expansion.hpp"
#include "hdx/hypercontractivity.hpp"
#include "hdx/io.hpp"
#include "hdx/operators.hpp"
#include "hdx/report.hpp"
#include "hdx/suite.hpp"
#include "hdx/symmetrization.hpp"
#include "hdx/util.hpp"

namespace {

using hdx::format_g17;

std::string jstr(const std::string& s) {
  return "\"" + hdx::json_escape(s) + "\"";
}

std::string jbool(bool b) { return b ? "true" : "false"; }

std::string jints(const std::vector<int32_t>& v) {
  std::string out = "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(v[i]);
  }
  return out + "]";
}

std::string jnums(const std::vector<double>& v) {
  std::string out = "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_g17(v[i]);
  }
  return out + "]";
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    hdx::write_atomic(out, text);
    std::printf("wrote %s\n", out.c_str());
  }
}

// A path that exists is loaded; anything else is parsed as a generator spec.
hdx::ComplexPtr resolve_complex(const std::string& spec) {
  if (std::filesystem::exists(spec)) return hdx::load_complex(spec);
  return hdx::make_complex(spec);
}

hdx::FaceFunction resolve_function(const std::string& spec,
                                   hdx::ComplexPtr X) {
  if (std::filesystem::exists(spec)) return hdx::load_function(spec, X);
  return hdx::builtin_function(X, spec);
}

int cmd_gen(const std::string& spec, const std::string& out,
            const std::string& fn_spec, const std::string& fn_out) {
  hdx::ComplexPtr X = hdx::make_complex(spec);
  hdx::save_complex(*X, out);
  std::printf("id %s\nfaces %d\nwrote %s\n", X->id().c_str(), X->face_count(),
              out.c_str());
  if (!fn_spec.empty()) {
    if (fn_out.empty()) throw hdx::Error("gen: --function needs --function-out");
    hdx::save_function(hdx::builtin_function(X, fn_spec), fn_out);
    std::printf("wrote %s\n", fn_out.c_str());
  }
  return 0;
}

int cmd_certify(const std::string& complex_spec, std::vector<double> qs,
                int jobs, const std::string& out) {
  hdx::ComplexPtr X = resolve_complex(complex_spec);
  hdx::CertificateOptions opts;
  opts.qs = std::move(qs);
  opts.jobs = jobs;
  hdx::ExpansionCertificate cert = hdx::gamma_certificate(X, opts);
  std::ostringstream os;
  os << "{\n";
  os << "  \"complex\": " << jstr(cert.complex_id) << ",\n";
  os << "  \"gamma\": " << format_g17(cert.gamma) << ",\n";
  os << "  \"degenerate_count\": " << cert.degenerate_count << ",\n";
  os << "  \"walks\": [\n";
  for (size_t i = 0; i < cert.entries.size(); ++i) {
    const hdx::LinkWalkEntry& e = cert.entries[i];
    os << "    {\"tau\": " << jstr(e.tau.str()) << ", \"i\": " << e.i
       << ", \"j\": " << e.j << ", \"lambda2\": " << format_g17(e.lambda2)
       << ", \"degenerate\": " << jbool(e.degenerate) << "}"
       << (i + 1 < cert.entries.size() ? "," : "") << "\n";
  }
  os << "  ],\n";
  os << "  \"q_norms\": [\n";
  for (size_t i = 0; i < cert.q_entries.size(); ++i) {
    const hdx::QNormEntry& e = cert.q_entries[i];
    os << "    {\"q\": " << format_g17(e.q)
       << ", \"lower\": " << format_g17(e.lower)
       << ", \"upper\": " << format_g17(e.upper) << "}"
       << (i + 1 < cert.q_entries.size() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
  emit(os.str(), out);
  return 0;
}

int cmd_decompose(const std::string& complex_spec, const std::string& fn_spec,
                  const std::string& out) {
  hdx::ComplexPtr X = resolve_complex(complex_spec);
  hdx::FaceFunction f = resolve_function(fn_spec, X);
  hdx::EfronSteinDecomposition dec = hdx::decompose(f);
  hdx::LevelProfile lp = hdx::level_profile(dec, f);
  hdx::TotalInfluence ti = hdx::total_influence(f, dec);
  std::ostringstream os;
  os << "{\n";
  os << "  \"complex\": " << jstr(X->id()) << ",\n";
  os << "  \"mean\": " << format_g17(f.mean()) << ",\n";
  os << "  \"norm2_sq\": " << format_g17(f.norm2_sq()) << ",\n";
  os << "  \"influence\": {\"via_laplacians\": "
     << format_g17(ti.via_laplacians)
     << ", \"via_levels\": " << format_g17(ti.via_levels) << "},\n";
  os << "  \"levels\": [\n";
  for (size_t i = 0; i < lp.weight.size(); ++i) {
    os << "    {\"level\": " << i
       << ", \"weight\": " << format_g17(lp.weight[i])
       << ", \"pairing\": " << format_g17(lp.pairing[i]) << "}"
       << (i + 1 < lp.weight.size() ? "," : "") << "\n";
  }
  os << "  ],\n";
  os << "  \"components\": [\n";
  const uint32_t n = 1u << X->dimension();
  for (uint32_t s = 0; s < n; ++s) {
    os << "    {\"S\": " << jstr(hdx::ColorSet(s).str()) << ", \"norm2_sq\": "
       << format_g17(dec.component(hdx::ColorSet(s)).norm2_sq()) << "}"
       << (s + 1 < n ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
  emit(os.str(), out);
  return 0;
}

int cmd_sym(const std::string& complex_spec, const std::string& fn_spec,
            double q, std::vector<double> r, const std::string& out) {
  hdx::ComplexPtr X = resolve_complex(complex_spec);
  hdx::FaceFunction f = resolve_function(fn_spec, X);
  hdx::SandwichParams params;
  params.q = q;
  hdx::SandwichCheck sc = hdx::sandwich_check(f, params);
  const int d = X->dimension();
  if (r.empty()) r.assign(d, 0.5);
  if (static_cast<int>(r.size()) != d)
    throw hdx::Error("sym: --r needs one coefficient per color");
  std::vector<int> pi(d);
  for (int i = 0; i < d; ++i) pi[i] = i;
  hdx::DecorrelationCheck dc = hdx::decorrelation_check(f, r, pi, q);
  std::ostringstream os;
  os << "{\n";
  os << "  \"complex\": " << jstr(X->id()) << ",\n";
  os << "  \"q\": " << format_g17(q) << ",\n";
  os << "  \"sandwich\": {\"c_q\": " << format_g17(sc.c_q)
     << ", \"f_norm\": " << format_g17(sc.f_norm)
     << ", \"lower_norm\": " << format_g17(sc.lower_norm)
     << ", \"upper_norm\": " << format_g17(sc.upper_norm)
     << ", \"pass_lower\": " << jbool(sc.pass_lower)
     << ", \"pass_upper\": " << jbool(sc.pass_upper) << "},\n";
  os << "  \"decorrelation\": {\"r\": " << jnums(r)
     << ", \"measured\": " << format_g17(dc.measured)
     << ", \"bound\": " << format_g17(dc.bound)
     << ", \"c_dr\": " << format_g17(dc.c_dr)
     << ", \"gamma\": " << format_g17(dc.gamma)
     << ", \"gamma_q\": " << format_g17(dc.gamma_q)
     << ", \"pass\": " << jbool(dc.pass) << "}\n";
  os << "}\n";
  emit(os.str(), out);
  return 0;
}

int cmd_hyper(const std::string& complex_spec, const std::string& fn_spec,
              double q, double rho, int max_i, const std::string& out) {
  hdx::ComplexPtr X = resolve_complex(complex_spec);
  hdx::FaceFunction f = resolve_function(fn_spec, X);
  hdx::GlobalnessProfile g = hdx::globalness(f);
  if (rho <= 0.0) rho = 1.0 / (q * g.minimal_r);
  if (max_i <= 0) max_i = std::min(2, X->dimension());
  hdx::OperatorFormCheck oc = hdx::operator_form_check(f, rho, q);
  std::ostringstream os;
  os << "{\n";
  os << "  \"complex\": " << jstr(X->id()) << ",\n";
  os << "  \"globalness\": {\"minimal_r\": " << format_g17(g.minimal_r)
     << ", \"by_size\": " << jnums(g.by_size) << "},\n";
  os << "  \"bonami\": [\n";
  for (int i = 1; i <= max_i; ++i) {
    hdx::BonamiCheck bc = hdx::bonami_check(f, i, q);
    os << "    {\"i\": " << i << ", \"q\": " << format_g17(q)
       << ", \"lhs\": " << format_g17(bc.lhs)
       << ", \"rhs\": " << format_g17(bc.rhs)
       << ", \"ratio\": " << format_g17(bc.ratio)
       << ", \"pass\": " << jbool(bc.pass) << "}" << (i < max_i ? "," : "")
       << "\n";
  }
  os << "  ],\n";
  os << "  \"operator_form\": {\"rho\": " << format_g17(oc.rho)
     << ", \"q\": " << format_g17(oc.q)
     << ", \"norm_q\": " << format_g17(oc.lhs)
     << ", \"norm_2\": " << format_g17(oc.f_norm2)
     << ", \"slack\": " << format_g17(oc.slack)
     << ", \"in_regime\": " << jbool(oc.in_regime) << "}\n";
  os << "}\n";
  emit(os.str(), out);
  return 0;
}

int cmd_booster(const std::string& complex_spec, const std::string& fn_spec,
                double tau, int size_cap, double K, const std::string& out) {
  hdx::ComplexPtr X = resolve_complex(complex_spec);
  hdx::FaceFunction f = resolve_function(fn_spec, X);
  if (K > 0.0) {
    hdx::BoosterDefaults defaults = hdx::booster_defaults(K);
    size_cap = std::min(defaults.size_cap, X->dimension());
    tau = defaults.tau;
  }
  bool has_negative = false, has_zero = false;
  for (double v : f.values()) {
    if (v < -0.5) has_negative = true;
    if (std::fabs(v) < 0.5) has_zero = true;
  }
  hdx::FaceFunction signs = (!has_negative && has_zero)
                                ? hdx::boolean_to_pm1(f)
                                : f;
  hdx::FaceFunction indicator = hdx::pm1_to_boolean(signs);
  hdx::BoosterSearchResult res = hdx::booster_search(signs, size_cap, tau);
  hdx::KKLWitness witness = hdx::kkl_witness(indicator, size_cap);
  std::ostringstream os;
  os << "{\n";
  os << "  \"complex\": " << jstr(X->id()) << ",\n";
  os << "  \"convention\": " << jstr(res.convention) << ",\n";
  os << "  \"mean\": " << format_g17(res.mean) << ",\n";
  os << "  \"variance\": " << format_g17(res.variance) << ",\n";
  os << "  \"tau\": " << format_g17(res.tau) << ",\n";
  os << "  \"size_cap\": " << res.size_cap << ",\n";
  os << "  \"covered_mass\": " << format_g17(res.covered_mass) << ",\n";
  os << "  \"boosters\": [\n";
  for (size_t i = 0; i < res.boosters.size(); ++i) {
    const hdx::BoosterRecord& b = res.boosters[i];
    os << "    {\"T\": " << jstr(b.T.str()) << ", \"x\": "
       << jints(b.assignment)
       << ", \"conditional\": " << format_g17(b.conditional)
       << ", \"deviation\": " << format_g17(b.deviation) << "}"
       << (i + 1 < res.boosters.size() ? "," : "") << "\n";
  }
  os << "  ],\n";
  os << "  \"witness\": {\"S\": " << jstr(witness.S.str())
     << ", \"x\": " << jints(witness.assignment)
     << ", \"density\": " << format_g17(witness.density)
     << ", \"mean\": " << format_g17(witness.mean) << "}\n";
  os << "}\n";
  emit(os.str(), out);
  return 0;
}

int cmd_verify(bool list_checks, const std::string& config,
               std::vector<std::string> checks, uint64_t seed, double tol,
               int jobs, bool include_runtime, const std::string& out,
               const std::string& csv, bool quiet) {
  if (list_checks) {
    for (const hdx::CheckInfo& info : hdx::registered_checks())
      std::printf("%-34s %s\n", info.name.c_str(), info.ref.c_str());
    return 0;
  }
  hdx::SuiteOptions opts;
  if (!config.empty()) {
    std::ifstream in(config);
    if (!in) throw hdx::Error("verify: cannot open config " + config);
    std::ostringstream ss;
    ss << in.rdbuf();
    opts = hdx::suite_options_from_json(ss.str());
  }
  if (!checks.empty()) opts.checks = std::move(checks);
  if (seed != 0) opts.seed = seed;
  if (tol > 0.0) opts.tol = tol;
  if (jobs > 0) opts.jobs = jobs;
  if (include_runtime) opts.include_runtime = true;
  if (!out.empty()) opts.out = out;
  if (!csv.empty()) opts.csv = csv;
  hdx::SuiteResult res = hdx::run_suite(opts);
  if (!quiet) {
    for (const hdx::CheckRecord& rec : res.records)
      std::printf("%-10s %-34s slack=%s%s%s\n", hdx::status_name(rec.status),
                  rec.name.c_str(), format_g17(rec.slack).c_str(),
                  rec.message.empty() ? "" : "  ", rec.message.c_str());
  }
  std::printf("%zu checks, %d failed, %d errored\n", res.records.size(),
              res.failed, res.errored);
  if (!opts.out.empty()) std::printf("wrote %s\n", opts.out.c_str());
  if (!opts.csv.empty()) std::printf("wrote %s\n", opts.csv.c_str());
  return res.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analysis toolkit for weighted partite complexes"};
  app.require_subcommand(1);

  std::string complex_spec, fn_spec, out, fn_out, config, csv;
  std::vector<double> qs, r;
  std::vector<std::string> checks;
  double q = 4.0, rho = 0.0, tau = 0.1, K = 0.0, tol = 0.0;
  int jobs = 0, max_size = 0;
  uint64_t seed = 0;
  bool list_checks = false, include_runtime = false, quiet = false;

  CLI::App* gen = app.add_subcommand("gen", "generate a complex file");
  gen->add_option("--complex", complex_spec, "generator spec")->required();
  gen->add_option("--out", out, "output path")->required();
  gen->add_option("--function", fn_spec, "optional builtin function spec");
  gen->add_option("--function-out", fn_out, "function output path");

  CLI::App* certify =
      app.add_subcommand("certify", "(q, gamma)-expansion certificate");
  certify->add_option("--complex", complex_spec, "path or generator spec")
      ->required();
  certify->add_option("--q", qs, "q values to bracket");
  certify->add_option("--jobs", jobs, "worker threads");
  certify->add_option("--out", out, "JSON output path");

  CLI::App* decompose =
      app.add_subcommand("decompose", "orthogonal decomposition profile");
  decompose->add_option("--complex", complex_spec, "path or generator spec")
      ->required();
  decompose->add_option("--function", fn_spec, "path or builtin spec")
      ->required();
  decompose->add_option("--out", out, "JSON output path");

  CLI::App* sym =
      app.add_subcommand("sym", "symmetrization sandwich and decorrelation");
  sym->add_option("--complex", complex_spec, "path or generator spec")
      ->required();
  sym->add_option("--function", fn_spec, "path or builtin spec")->required();
  sym->add_option("--q", q, "exponent (default 4)");
  sym->add_option("--r", r, "per-color noise coefficients (default 0.5)");
  sym->add_option("--out", out, "JSON output path");

  CLI::App* hyper =
      app.add_subcommand("hyper", "globalness and hypercontractivity profile");
  hyper->add_option("--complex", complex_spec, "path or generator spec")
      ->required();
  hyper->add_option("--function", fn_spec, "path or builtin spec")->required();
  hyper->add_option("--q", q, "even exponent (default 4)");
  hyper->add_option("--rho", rho, "noise rate (default 1/(q r))");
  hyper->add_option("--max-size", max_size, "largest level i (default 2)");
  hyper->add_option("--out", out, "JSON output path");

  CLI::App* booster =
      app.add_subcommand("booster", "booster search and density witness");
  booster->add_option("--complex", complex_spec, "path or generator spec")
      ->required();
  booster->add_option("--function", fn_spec, "path or builtin spec")
      ->required();
  booster->add_option("--tau", tau, "deviation threshold (default 0.1)");
  booster->add_option("--max-size", max_size, "restriction size cap");
  booster->add_option("--K", K, "derive cap and tau from K");
  booster->add_option("--out", out, "JSON output path");

  CLI::App* verify = app.add_subcommand("verify", "run the property suite");
  verify->add_flag("--list-checks", list_checks, "list names and statements");
  verify->add_option("--config", config, "JSON config file");
  verify->add_option("--checks", checks, "check names (default: all)");
  verify->add_option("--seed", seed, "base seed (default 2026)");
  verify->add_option("--tol", tol, "identity tolerance (default 1e-9)");
  verify->add_option("--jobs", jobs, "worker threads");
  verify->add_flag("--include-runtime", include_runtime,
                   "add runtimes to the JSON report");
  verify->add_option("--out", out, "JSON report path");
  verify->add_option("--csv", csv, "CSV report path");
  verify->add_flag("--quiet", quiet, "summary line only");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(complex_spec, out, fn_spec, fn_out);
    if (certify->parsed()) return cmd_certify(complex_spec, qs, jobs, out);
    if (decompose->parsed()) return cmd_decompose(complex_spec, fn_spec, out);
    if (sym->parsed()) return cmd_sym(complex_spec, fn_spec, q, r, out);
    if (hyper->parsed())
      return cmd_hyper(complex_spec, fn_spec, q, rho, max_size, out);
    if (booster->parsed())
      return cmd_booster(complex_spec, fn_spec, tau,
                         max_size > 0 ? max_size : 2, K, out);
    if (verify->parsed())
      return cmd_verify(list_checks, config, checks, seed, tol, jobs,
                        include_runtime, out, csv, quiet);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
