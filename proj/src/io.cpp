#include "hdx/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "hdx/util.hpp"

namespace hdx {

namespace {

std::string where(const std::string& path, int line) {
  return path + ":" + std::to_string(line);
}

// Comment-stripped, whitespace-tokenized lines with their 1-based numbers.
std::vector<std::pair<int, std::vector<std::string>>> read_tokens(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<std::pair<int, std::vector<std::string>>> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    if (!tokens.empty()) out.emplace_back(number, std::move(tokens));
  }
  return out;
}

int64_t parse_int(const std::string& tok, const std::string& at) {
  size_t used = 0;
  int64_t v = 0;
  try {
    v = std::stoll(tok, &used);
  } catch (const std::exception&) {
    throw Error(at + ": expected an integer, got '" + tok + "'");
  }
  if (used != tok.size())
    throw Error(at + ": expected an integer, got '" + tok + "'");
  return v;
}

double parse_double(const std::string& tok, const std::string& at) {
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw Error(at + ": expected a number, got '" + tok + "'");
  }
  if (used != tok.size())
    throw Error(at + ": expected a number, got '" + tok + "'");
  return v;
}

std::string face_str(std::span<const int32_t> face) {
  std::string out = "(";
  for (size_t i = 0; i < face.size(); ++i) {
    if (i) out += " ";
    out += std::to_string(face[i]);
  }
  return out + ")";
}

}  // namespace

ComplexPtr load_complex(const std::string& path) {
  auto lines = read_tokens(path);
  if (lines.empty()) throw Error(path + ": no data lines");

  const auto& [hline, header] = lines.front();
  const std::string hat = where(path, hline);
  const int64_t d = parse_int(header[0], hat);
  if (d < 1 || d > 32) throw Error(hat + ": dimension out of range");
  if (static_cast<int64_t>(header.size()) != d + 1)
    throw Error(hat + ": expected " + std::to_string(d) +
                " ground-set sizes after the dimension");
  std::vector<int> sizes(d);
  for (int i = 0; i < d; ++i) {
    const int64_t k = parse_int(header[i + 1], hat);
    if (k < 1) throw Error(hat + ": ground-set size must be positive");
    sizes[i] = static_cast<int>(k);
  }

  std::vector<std::pair<std::vector<int32_t>, double>> faces;
  for (size_t li = 1; li < lines.size(); ++li) {
    const auto& [number, tokens] = lines[li];
    const std::string at = where(path, number);
    if (static_cast<int64_t>(tokens.size()) != d + 1)
      throw Error(at + ": expected " + std::to_string(d) +
                  " vertex ids and a weight");
    std::vector<int32_t> face(d);
    for (int i = 0; i < d; ++i) {
      const int64_t v = parse_int(tokens[i], at);
      if (v < 0 || v >= sizes[i])
        throw Error(at + ": vertex id " + std::to_string(v) +
                    " outside ground set of color " + std::to_string(i));
      face[i] = static_cast<int32_t>(v);
    }
    const double w = parse_double(tokens[d], at);
    if (!(w > 0.0)) throw Error(at + ": weight must be positive");
    faces.emplace_back(std::move(face), w);
  }
  if (faces.empty()) throw Error(path + ": complex has no faces");

  try {
    return build_explicit(faces, &sizes);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

void save_complex(const PartiteComplex& X, const std::string& path) {
  std::string out;
  out += std::to_string(X.dimension());
  for (int k : X.color_sizes()) out += " " + std::to_string(k);
  out += "\n";
  for (int i = 0; i < X.face_count(); ++i) {
    for (int32_t v : X.face(i)) out += std::to_string(v) + " ";
    out += format_g17(X.face_weight(i)) + "\n";
  }
  write_atomic(path, out);
}

FaceFunction load_function(const std::string& path, ComplexPtr X) {
  if (!X) throw Error("load_function: null complex");
  const int d = X->dimension();
  auto lines = read_tokens(path);

  std::vector<double> values(X->face_count(), 0.0);
  std::vector<int> seen_at(X->face_count(), 0);
  for (const auto& [number, tokens] : lines) {
    const std::string at = where(path, number);
    if (static_cast<int>(tokens.size()) != d + 1)
      throw Error(at + ": expected " + std::to_string(d) +
                  " vertex ids and a value");
    std::vector<int32_t> face(d);
    for (int i = 0; i < d; ++i)
      face[i] = static_cast<int32_t>(parse_int(tokens[i], at));
    const int idx = X->find_face(face);
    if (idx < 0)
      throw Error(at + ": face " + face_str(face) +
                  " is not in the support of the complex");
    if (seen_at[idx])
      throw Error(at + ": duplicate value for face " + face_str(face) +
                  " (first given at line " + std::to_string(seen_at[idx]) +
                  ")");
    seen_at[idx] = number;
    values[idx] = parse_double(tokens[d], at);
  }
  for (int i = 0; i < X->face_count(); ++i)
    if (!seen_at[i])
      throw Error(path + ": missing value for face " + face_str(X->face(i)));

  const MarginalTable& top = X->marginal_table(ColorSet::all(d));
  std::vector<double> by_row(top.rows());
  for (int i = 0; i < X->face_count(); ++i) by_row[top.face_row[i]] = values[i];
  return FaceFunction::on(std::move(X), ColorSet::all(d), std::move(by_row));
}

void save_function(const FaceFunction& f, const std::string& path) {
  const ComplexPtr& X = f.complex();
  if (!X) throw Error("save_function: empty function");
  if (f.domain() != ColorSet::all(X->dimension()))
    throw Error("save_function: f must live on the top faces");
  std::string out;
  for (int i = 0; i < X->face_count(); ++i) {
    for (int32_t v : X->face(i)) out += std::to_string(v) + " ";
    out += format_g17(f.at_face(i)) + "\n";
  }
  write_atomic(path, out);
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("short write to " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("cannot rename " + tmp + " to " + path + ": " +
                      ec.message());
}

}  // namespace hdx
