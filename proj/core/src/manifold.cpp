#include "metallic/manifold.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace metallic {

namespace {

using nlohmann::json;

constexpr double kDegenerateDet = 1e-10;

ExprMat parse_matrix(const json& rows, int dim, const std::vector<std::string>& coords,
                     const char* field) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != dim)
    throw DimensionMismatch(std::string(field) + " must be a " + std::to_string(dim) + "x" +
                            std::to_string(dim) + " matrix");
  ExprMat m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      throw DimensionMismatch(std::string(field) + " must be a " + std::to_string(dim) + "x" +
                              std::to_string(dim) + " matrix");
    for (int j = 0; j < dim; ++j) {
      const json& cell = row[static_cast<std::size_t>(j)];
      if (!cell.is_string())
        throw SchemaError(std::string(field) + " entries must be expression strings");
      m(i, j) = parse_expression(cell.get<std::string>(), coords);
    }
  }
  return m;
}

}  // namespace

ChartManifold load_manifest(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("manifest must be a JSON object");

  auto require = [&](const char* key) -> const json& {
    if (!doc.contains(key)) throw SchemaError(std::string("manifest missing field '") + key + "'");
    return doc.at(key);
  };

  ChartManifold m;
  const json& jname = require("name");
  if (!jname.is_string()) throw SchemaError("'name' must be a string");
  m.name = jname.get<std::string>();

  const json& jdim = require("dim");
  if (!jdim.is_number_integer() || jdim.get<int>() < 1)
    throw SchemaError("'dim' must be a positive integer");
  m.dim = jdim.get<int>();

  const json& jcoords = require("coords");
  if (!jcoords.is_array()) throw SchemaError("'coords' must be an array of identifiers");
  if (static_cast<int>(jcoords.size()) != m.dim)
    throw DimensionMismatch("'coords' length must equal dim");
  for (const auto& c : jcoords) {
    if (!c.is_string()) throw SchemaError("'coords' entries must be strings");
    m.coords.push_back(c.get<std::string>());
  }
  for (std::size_t i = 0; i < m.coords.size(); ++i)
    for (std::size_t j = i + 1; j < m.coords.size(); ++j)
      if (m.coords[i] == m.coords[j])
        throw SchemaError("coordinate names must be distinct: '" + m.coords[i] + "'");

  const json& jp = require("p");
  const json& jq = require("q");
  if (!jp.is_number() || !jq.is_number()) throw SchemaError("'p' and 'q' must be numbers");
  m.p = jp.get<double>();
  m.q = jq.get<double>();

  const json& jdomain = require("domain");
  if (!jdomain.is_array() || static_cast<int>(jdomain.size()) != m.dim)
    throw DimensionMismatch("'domain' must have one [lo,hi] pair per coordinate");
  for (const auto& iv : jdomain) {
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
      throw SchemaError("'domain' entries must be [lo,hi] number pairs");
    Interval in{iv[0].get<double>(), iv[1].get<double>()};
    if (!(in.lo <= in.hi)) throw SchemaError("'domain' intervals must satisfy lo <= hi");
    m.domain.push_back(in);
  }

  m.g = parse_matrix(require("g"), m.dim, m.coords, "g");
  m.J = parse_matrix(require("J"), m.dim, m.coords, "J");
  return m;
}

ChartManifold load_manifest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open manifest file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_manifest(buf.str());
}

std::string to_manifest(const ChartManifold& m) {
  json doc;
  doc["name"] = m.name;
  doc["dim"] = m.dim;
  doc["coords"] = m.coords;
  doc["p"] = m.p;
  doc["q"] = m.q;
  json domain = json::array();
  for (const auto& iv : m.domain) domain.push_back({iv.lo, iv.hi});
  doc["domain"] = domain;
  auto matrix = [&](const ExprMat& mat) {
    json rows = json::array();
    for (int i = 0; i < mat.rows(); ++i) {
      json row = json::array();
      for (int j = 0; j < mat.cols(); ++j) row.push_back(mat(i, j).str(m.coords));
      rows.push_back(row);
    }
    return rows;
  };
  doc["g"] = matrix(m.g);
  doc["J"] = matrix(m.J);
  return doc.dump(2);
}

namespace {

// 53-bit uniform draw in [0,1); avoids std::uniform_real_distribution so the
// stream is identical across standard library implementations.
class BoxSampler {
 public:
  explicit BoxSampler(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  double uniform01() {
    // splitmix64 step
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace

std::vector<std::vector<double>> sample_box(std::span<const Interval> box, std::uint64_t seed,
                                            int count) {
  BoxSampler rng(seed);
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    std::vector<double> x(box.size());
    for (std::size_t j = 0; j < box.size(); ++j)
      x[j] = box[j].lo + (box[j].hi - box[j].lo) * rng.uniform01();
    out.push_back(std::move(x));
  }
  return out;
}

PointSample sample_points(const ChartManifold& m, std::uint64_t seed, int count) {
  if (count < 1) throw Error("sample count must be >= 1");
  PointSample s;
  s.seed = seed;
  s.count = count;
  s.points = sample_box(m.domain, seed, count);
  return s;
}

Mat metric_at(const ChartManifold& m, std::span<const double> x) { return m.g.eval(x); }

Mat inverse_metric_at(const ChartManifold& m, std::span<const double> x) {
  const Mat g = m.g.eval(x);
  if (std::abs(determinant(g)) < kDegenerateDet)
    throw DegenerateMetric("metric is degenerate at a sampled point of '" + m.name + "'");
  return inverse(g);
}

Mat structure_at(const ChartManifold& m, std::span<const double> x) { return m.J.eval(x); }

Vec sharp(const ChartManifold& m, std::span<const double> x, std::span<const double> covector) {
  return inverse_metric_at(m, x) * Vec(covector.begin(), covector.end());
}

Vec flat(const ChartManifold& m, std::span<const double> x, std::span<const double> vector) {
  const Mat g = metric_at(m, x);
  if (std::abs(determinant(g)) < kDegenerateDet)
    throw DegenerateMetric("metric is degenerate at a sampled point of '" + m.name + "'");
  return g * Vec(vector.begin(), vector.end());
}

CheckReport check_g_symmetric_endo(const ChartManifold& m, const ExprMat& J, const PointSample& s,
                                   double tol, const std::string& check_id) {
  double err = 0.0;
  for (const auto& x : s.points) {
    const Mat g = m.g.eval(x);
    const Mat j = J.eval(x);
    err = std::max(err, max_abs_diff(transpose(j) * g, g * j));
  }
  return CheckReport::make(check_id, m.name, s.count, err, tol);
}

CheckReport check_g_symmetric_endo(const ChartManifold& m, const PointSample& s, double tol) {
  return check_g_symmetric_endo(m, m.J, s, tol, "core.j_symmetric");
}

CheckReport check_polynomial(const ChartManifold& m, const ExprMat& J, double p, double q,
                             const PointSample& s, double tol, const std::string& check_id) {
  double err = 0.0;
  for (const auto& x : s.points) {
    const Mat j = J.eval(x);
    const Mat res = j * j - p * j - q * Mat::identity(j.rows());
    err = std::max(err, inf_norm(res));
  }
  return CheckReport::make(check_id, m.name, s.count, err, tol);
}

CheckReport check_polynomial(const ChartManifold& m, const PointSample& s, double tol) {
  return check_polynomial(m, m.J, m.p, m.q, s, tol, "core.j_polynomial");
}

Signature metric_signature(const ChartManifold& m, std::span<const double> x) {
  Mat g = metric_at(m, x);
  // symmetrize before the eigen solve
  Mat sym(g.rows(), g.cols());
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) sym(i, j) = 0.5 * (g(i, j) + g(j, i));
  const Vec ev = symmetric_eigenvalues(sym);
  double scale = 0.0;
  for (double v : ev) scale = std::max(scale, std::abs(v));
  const double cutoff = 1e-10 * std::max(1.0, scale);
  Signature sig;
  for (double v : ev) {
    if (v > cutoff) ++sig.positive;
    else if (v < -cutoff) ++sig.negative;
  }
  return sig;
}

double fd_partial(const std::function<double(std::span<const double>)>& f, std::vector<double> x,
                  int i, double h) {
  if (i < 0 || i >= static_cast<int>(x.size())) throw Error("fd_partial: index out of range");
  const double xi = x[static_cast<std::size_t>(i)];
  x[static_cast<std::size_t>(i)] = xi + h;
  const double fp = f(x);
  x[static_cast<std::size_t>(i)] = xi - h;
  const double fm = f(x);
  return (fp - fm) / (2.0 * h);
}

}  // namespace metallic
