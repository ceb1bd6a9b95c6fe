#include "hdx/builtins.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "hdx/rng.hpp"
#include "hdx/util.hpp"

namespace hdx {

namespace {

std::pair<std::string, std::vector<double>> parse_spec(
    const std::string& spec, const char* what) {
  std::string name = spec;
  std::vector<double> args;
  if (auto colon = spec.find(':'); colon != std::string::npos) {
    name = spec.substr(0, colon);
    std::string rest = spec.substr(colon + 1);
    size_t pos = 0;
    while (pos <= rest.size()) {
      size_t comma = rest.find(',', pos);
      if (comma == std::string::npos) comma = rest.size();
      const std::string tok = rest.substr(pos, comma - pos);
      size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = std::string::npos;
      }
      if (used != tok.size())
        throw Error(std::string(what) + ": bad argument '" + tok + "' in '" +
                    spec + "'");
      args.push_back(v);
      pos = comma + 1;
    }
  }
  if (name.empty()) throw Error(std::string(what) + ": empty name");
  return {name, args};
}

int64_t integral_arg(double v, const char* what) {
  const double r = std::round(v);
  if (std::fabs(v - r) > 1e-9)
    throw Error(std::string(what) + ": expected an integer argument, got " +
                format_g17(v));
  return static_cast<int64_t>(r);
}

int color_arg(double v, int d, const char* what) {
  const int64_t c = integral_arg(v, what);
  if (c < 0 || c >= d)
    throw Error(std::string(what) + ": coordinate " + std::to_string(c) +
                " outside [0, " + std::to_string(d) + ")");
  return static_cast<int>(c);
}

std::vector<int> coordinate_list(const std::vector<double>& args, int d,
                                 const char* what) {
  std::vector<int> out;
  if (args.empty()) {
    out.resize(d);
    for (int i = 0; i < d; ++i) out[i] = i;
    return out;
  }
  for (double a : args) out.push_back(color_arg(a, d, what));
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end())
    throw Error(std::string(what) + ": repeated coordinate");
  return out;
}

void require_binary(const PartiteComplex& X, const std::vector<int>& coords,
                    const char* what) {
  for (int c : coords)
    if (X.color_sizes()[c] != 2)
      throw Error(std::string(what) + ": color " + std::to_string(c) +
                  " is not binary (+-1 builtins need ground sets {0,1})");
}

double pm(int32_t v) { return v == 1 ? 1.0 : -1.0; }

FaceFunction from_face_values(ComplexPtr X, std::vector<double> by_face) {
  const ColorSet all = ColorSet::all(X->dimension());
  const MarginalTable& top = X->marginal_table(all);
  std::vector<double> by_row(top.rows());
  for (int i = 0; i < X->face_count(); ++i)
    by_row[top.face_row[i]] = by_face[i];
  return FaceFunction::on(std::move(X), all, std::move(by_row));
}

uint64_t seed_arg(const std::vector<double>& args, size_t at,
                  const char* what) {
  if (args.size() <= at)
    throw Error(std::string(what) + ": a seed argument is required");
  const int64_t s = integral_arg(args[at], what);
  if (s < 0) throw Error(std::string(what) + ": seed must be >= 0");
  return static_cast<uint64_t>(s);
}

}  // namespace

FaceFunction builtin_function(ComplexPtr X, const std::string& name,
                              const std::vector<double>& args) {
  if (!X) throw Error("builtin_function: null complex");
  const int d = X->dimension();
  const int n = X->face_count();
  std::vector<double> v(n);

  if (name == "dictator") {
    if (args.size() != 1)
      throw Error("dictator: exactly one coordinate argument expected");
    const int c = color_arg(args[0], d, "dictator");
    require_binary(*X, {c}, "dictator");
    for (int i = 0; i < n; ++i) v[i] = pm(X->face(i)[c]);
  } else if (name == "parity") {
    const auto coords = coordinate_list(args, d, "parity");
    require_binary(*X, coords, "parity");
    for (int i = 0; i < n; ++i) {
      double p = 1.0;
      for (int c : coords) p *= pm(X->face(i)[c]);
      v[i] = p;
    }
  } else if (name == "majority") {
    const auto coords = coordinate_list(args, d, "majority");
    if (coords.size() % 2 == 0)
      throw Error("majority: needs an odd number of coordinates");
    require_binary(*X, coords, "majority");
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int c : coords) s += pm(X->face(i)[c]);
      v[i] = s > 0 ? 1.0 : -1.0;
    }
  } else if (name == "indicator") {
    if (args.empty() || args.size() > 2)
      throw Error("indicator: expected coordinate and optional vertex id");
    const int c = color_arg(args[0], d, "indicator");
    const int64_t want = args.size() == 2 ? integral_arg(args[1], "indicator")
                                          : 1;
    if (want < 0 || want >= X->color_sizes()[c])
      throw Error("indicator: vertex id " + std::to_string(want) +
                  " outside ground set of color " + std::to_string(c));
    for (int i = 0; i < n; ++i) v[i] = X->face(i)[c] == want ? 1.0 : 0.0;
  } else if (name == "and") {
    const auto coords = coordinate_list(args, d, "and");
    for (int c : coords)
      if (X->color_sizes()[c] < 2)
        throw Error("and: color " + std::to_string(c) +
                    " has no vertex id 1");
    for (int i = 0; i < n; ++i) {
      bool all_ones = true;
      for (int c : coords) all_ones = all_ones && X->face(i)[c] == 1;
      v[i] = all_ones ? 1.0 : 0.0;
    }
  } else if (name == "random_pm1") {
    Rng rng(seed_arg(args, 0, "random_pm1"));
    for (int i = 0; i < n; ++i) v[i] = rng.pm1();
  } else if (name == "random_gauss") {
    Rng rng(seed_arg(args, 0, "random_gauss"));
    for (int i = 0; i < n; ++i) v[i] = rng.normal();
  } else {
    throw Error("builtin_function: unknown name '" + name + "'");
  }
  return from_face_values(std::move(X), std::move(v));
}

FaceFunction builtin_function(ComplexPtr X, const std::string& spec) {
  auto [name, args] = parse_spec(spec, "builtin_function");
  return builtin_function(std::move(X), name, args);
}

ComplexPtr gen_uniform_cube(int d) {
  if (d < 1) throw Error("cube: dimension must be positive");
  return build_product(
      std::vector<std::vector<double>>(d, std::vector<double>{0.5, 0.5}));
}

ComplexPtr gen_biased_cube(int d, double p) {
  if (d < 1) throw Error("biased: dimension must be positive");
  if (!(p > 0.0) || !(p < 1.0))
    throw Error("biased: p must lie strictly between 0 and 1");
  return build_product(
      std::vector<std::vector<double>>(d, std::vector<double>{1.0 - p, p}));
}

ComplexPtr gen_random_product(const std::vector<int>& sizes, uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> marginals;
  for (int k : sizes) {
    if (k < 1) throw Error("product: ground-set sizes must be positive");
    std::vector<double> m(k);
    for (double& w : m) w = rng.uniform(0.2, 1.0);
    marginals.push_back(std::move(m));
  }
  return build_product(marginals);
}

ComplexPtr gen_random_sparse(const std::vector<int>& sizes, int target,
                             uint64_t seed) {
  const int d = static_cast<int>(sizes.size());
  if (d < 1) throw Error("sparse: dimension must be positive");
  if (target < 1) throw Error("sparse: target support must be positive");
  double full = 1.0;
  for (int k : sizes) {
    if (k < 1) throw Error("sparse: ground-set sizes must be positive");
    full *= k;
  }
  Rng rng(seed);
  std::set<std::vector<int32_t>> support;
  const int want = static_cast<int>(std::min<double>(target, full));
  int attempts = 0;
  while (static_cast<int>(support.size()) < want && attempts < 200 * want) {
    ++attempts;
    std::vector<int32_t> face(d);
    for (int c = 0; c < d; ++c)
      face[c] = static_cast<int32_t>(rng.uniform_int(0, sizes[c] - 1));
    support.insert(std::move(face));
  }
  std::vector<std::pair<std::vector<int32_t>, double>> faces;
  for (const auto& face : support)
    faces.emplace_back(face, rng.uniform(0.2, 1.0));
  std::vector<int> k(sizes);
  return build_explicit(faces, &k);
}

ComplexPtr make_complex(const std::string& spec) {
  auto [name, args] = parse_spec(spec, "make_complex");
  auto dim = [&](size_t expected_extra) {
    if (args.empty()) throw Error(name + ": missing dimension argument");
    const int d = static_cast<int>(integral_arg(args[0], name.c_str()));
    if (d < 1 || d > 32) throw Error(name + ": dimension out of range");
    if (args.size() != 1 + static_cast<size_t>(d) + expected_extra &&
        expected_extra != size_t(-1))
      throw Error(name + ": expected d ground-set sizes plus " +
                  std::to_string(expected_extra) + " trailing arguments");
    return d;
  };
  auto sizes_of = [&](int d) {
    std::vector<int> sizes(d);
    for (int i = 0; i < d; ++i) {
      sizes[i] = static_cast<int>(integral_arg(args[1 + i], name.c_str()));
      if (sizes[i] < 1) throw Error(name + ": ground-set sizes must be >= 1");
    }
    return sizes;
  };

  if (name == "cube") {
    if (args.size() != 1) throw Error("cube: expected cube:d");
    return gen_uniform_cube(
        static_cast<int>(integral_arg(args[0], "cube")));
  }
  if (name == "biased") {
    if (args.size() != 2) throw Error("biased: expected biased:d,p");
    return gen_biased_cube(static_cast<int>(integral_arg(args[0], "biased")),
                           args[1]);
  }
  if (name == "product") {
    const int d = dim(1);
    return gen_random_product(sizes_of(d),
                              seed_arg(args, 1 + d, "product"));
  }
  if (name == "sparse") {
    const int d = dim(2);
    const int target =
        static_cast<int>(integral_arg(args[1 + d], "sparse"));
    return gen_random_sparse(sizes_of(d), target,
                             seed_arg(args, 2 + d, "sparse"));
  }
  if (name == "nearproduct") {
    const int d = dim(2);
    const double eps = args[1 + d];
    auto base = gen_random_product(sizes_of(d),
                                   seed_arg(args, 2 + d, "nearproduct"));
    return perturb(*base, eps, seed_arg(args, 2 + d, "nearproduct") + 1);
  }
  throw Error("make_complex: unknown generator '" + name + "'");
}

}  // namespace hdx
