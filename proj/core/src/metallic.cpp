#include "metallic/metallic.hpp"

#include <cmath>

namespace metallic {

double metallic_number(double p, double q) {
  const double d = p * p + 4.0 * q;
  if (d < 0.0) throw NegativeDiscriminant("p^2 + 4q < 0 has no real root");
  return (p + std::sqrt(d)) / 2.0;
}

std::span<const NamedMean> named_means() {
  static const NamedMean means[] = {
      {"Golden", 1.0, 1.0, 1.6180339887498949},
      {"Silver", 2.0, 1.0, 2.414213562373095},
      {"Bronze", 3.0, 1.0, 3.302775637731995},
      {"Subtle", 4.0, 1.0, 4.23606797749979},
      {"Copper", 1.0, 2.0, 2.0},
      {"Nickel", 1.0, 3.0, 2.302775637731995},
  };
  return means;
}

namespace {

double root_for_sign(double p, double q, int sign) {
  const double d = p * p + 4.0 * q;
  if (d < 0.0) throw NegativeDiscriminant("p^2 + 4q < 0 has no real root");
  return (p + (sign >= 0 ? 1.0 : -1.0) * std::sqrt(d)) / 2.0;
}

}  // namespace

Mat trivial_structure(double p, double q, int n, int sign) {
  const double mu = root_for_sign(p, q, sign);
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = mu;
  return m;
}

ExprMat trivial_structure_field(double p, double q, int n, int sign) {
  return ExprMat::scalar(n, root_for_sign(p, q, sign));
}

namespace {

// Largest residual of (J_N^2 + I, J_N^T g - g J_N) over the sample.
double norden_residual(const ChartManifold& m, const ExprMat& norden, const PointSample& s) {
  double err = 0.0;
  for (const auto& x : s.points) {
    const Mat j = norden.eval(x);
    const Mat g = m.g.eval(x);
    err = std::max(err, inf_norm(j * j + Mat::identity(j.rows())));
    err = std::max(err, max_abs_diff(transpose(j) * g, g * j));
  }
  return err;
}

}  // namespace

MetallicFromNorden metallic_from_norden(const ChartManifold& m, const ExprMat& norden, double a,
                                        double b, const PointSample& s, double tol) {
  if (norden.rows() != m.dim || norden.cols() != m.dim)
    throw DimensionMismatch("norden structure shape must match the chart dimension");
  const double nerr = norden_residual(m, norden, s);
  if (nerr > tol)
    throw NotNorden("input is not a Norden structure (residual " + std::to_string(nerr) + ")");

  MetallicFromNorden out;
  out.J = (Expr::constant(a) * norden + ExprMat::scalar(m.dim, b)).simplified();
  out.params = NordenFamilyParams{a, b}.induced();

  // J_{a,b}^2 = 2b J_{a,b} - (a^2+b^2) I must hold at the samples.
  double err = 0.0;
  for (const auto& x : s.points) {
    const Mat j = out.J.eval(x);
    const Mat res = j * j - out.params.p * j - out.params.q * Mat::identity(m.dim);
    err = std::max(err, inf_norm(res));
  }
  if (err > tol)
    throw Error("induced family identity failed unexpectedly (residual " + std::to_string(err) +
                ")");
  return out;
}

ExprMat norden_from_metallic(const ChartManifold& m, int sign, const PointSample& s, double tol) {
  const double d = m.discriminant();
  if (!(d < 0.0))
    throw WrongDiscriminant("norden_from_metallic needs p^2 + 4q < 0, got " + std::to_string(d));
  const double root = std::sqrt(-d);
  const double scale = (sign >= 0 ? 1.0 : -1.0) / root;
  ExprMat jn = (Expr::constant(scale) *
                (2.0 * m.J - ExprMat::scalar(m.dim, m.p)))
                   .simplified();
  const double err = [&] {
    double e = 0.0;
    for (const auto& x : s.points) {
      const Mat j = jn.eval(x);
      const Mat g = m.g.eval(x);
      e = std::max(e, inf_norm(j * j + Mat::identity(m.dim)));
      e = std::max(e, max_abs_diff(transpose(j) * g, g * j));
    }
    return e;
  }();
  if (err > tol)
    throw NotNorden("derived structure failed its Norden checks (residual " +
                    std::to_string(err) + ")");
  return jn;
}

}  // namespace metallic
