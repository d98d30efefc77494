#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "metallic/linalg.hpp"
#include "metallic/report.hpp"

namespace metallic {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Single-chart pseudo-Riemannian manifold with a (1,1)-structure J and the
// structure polynomial parameters p, q. Component functions are symbolic
// expressions in the chart coordinates; verification happens numerically at
// points sampled from the domain box.
struct ChartManifold {
  std::string name;
  int dim = 0;
  std::vector<std::string> coords;
  ExprMat g;  // metric components g_ij
  ExprMat J;  // structure components J^i_j (row = upper index)
  double p = 0.0;
  double q = 0.0;
  std::vector<Interval> domain;

  double discriminant() const { return p * p + 4.0 * q; }
};

// Manifest schema:
//   {"name": str, "dim": int, "coords": [str], "p": num, "q": num,
//    "domain": [[lo,hi],...], "g": [[expr]], "J": [[expr]]}
ChartManifold load_manifest(const std::string& json_text);
ChartManifold load_manifest_file(const std::string& path);
std::string to_manifest(const ChartManifold& m);

struct PointSample {
  std::uint64_t seed = 0;
  int count = 0;
  std::vector<std::vector<double>> points;
};

// Deterministic uniform sample from the domain box: the same (seed, count,
// domain) always yields the same points.
PointSample sample_points(const ChartManifold& m, std::uint64_t seed, int count);
std::vector<std::vector<double>> sample_box(std::span<const Interval> box, std::uint64_t seed,
                                            int count);

Mat metric_at(const ChartManifold& m, std::span<const double> x);
Mat inverse_metric_at(const ChartManifold& m, std::span<const double> x);  // DegenerateMetric
Mat structure_at(const ChartManifold& m, std::span<const double> x);

Vec sharp(const ChartManifold& m, std::span<const double> x, std::span<const double> covector);
Vec flat(const ChartManifold& m, std::span<const double> x, std::span<const double> vector);

// (J^T g - g J)(x) residual over the sample.
CheckReport check_g_symmetric_endo(const ChartManifold& m, const PointSample& s, double tol);
CheckReport check_g_symmetric_endo(const ChartManifold& m, const ExprMat& J, const PointSample& s,
                                   double tol, const std::string& check_id);

// (J^2 - pJ - qI)(x) residual over the sample.
CheckReport check_polynomial(const ChartManifold& m, const PointSample& s, double tol);
CheckReport check_polynomial(const ChartManifold& m, const ExprMat& J, double p, double q,
                             const PointSample& s, double tol, const std::string& check_id);

// Signature of the symmetrized metric: (#positive, #negative) eigenvalues.
struct Signature {
  int positive = 0;
  int negative = 0;
  bool operator==(const Signature&) const = default;
};
Signature metric_signature(const ChartManifold& m, std::span<const double> x);

// Central finite difference (f(x+h e_i) - f(x-h e_i)) / (2h).
double fd_partial(const std::function<double(std::span<const double>)>& f,
                  std::vector<double> x, int i, double h);

}  // namespace metallic
