#pragma once

#include <span>

#include "metallic/manifold.hpp"

namespace metallic {

// Structure polynomial parameters J^2 = pJ + qI with the discriminant
// classification that drives which constructions apply.
struct MetallicParams {
  double p = 0.0;
  double q = 0.0;

  double discriminant() const { return p * p + 4.0 * q; }

  enum class Kind { hyperbolic, parabolic, elliptic_norden };
  Kind kind() const {
    const double d = discriminant();
    if (d > 0.0) return Kind::hyperbolic;
    if (d == 0.0) return Kind::parabolic;
    return Kind::elliptic_norden;
  }
};

// a*J_N + b*I built from an almost complex structure J_N induces the
// parameters p = 2b, q = -(a^2 + b^2), so the discriminant is -4a^2.
struct NordenFamilyParams {
  double a = 0.0;
  double b = 0.0;
  MetallicParams induced() const { return {2.0 * b, -(a * a + b * b)}; }
};

// Positive root of x^2 - px - q = 0. Throws NegativeDiscriminant.
double metallic_number(double p, double q);

struct NamedMean {
  const char* name;
  double p;
  double q;
  double value;
};

// Golden, Silver, Bronze, Subtle, Copper, Nickel.
std::span<const NamedMean> named_means();

// mu*I with mu = (p + sign*sqrt(p^2+4q)) / 2; parallel for any metric.
Mat trivial_structure(double p, double q, int n, int sign = +1);
ExprMat trivial_structure_field(double p, double q, int n, int sign = +1);

struct MetallicFromNorden {
  ExprMat J;
  MetallicParams params;
};

// a*J_N + b*I from a verified Norden structure J_N on m's metric. Checks
// J_N^2 = -I, g-symmetry, and the induced polynomial identity numerically
// over the sample; throws NotNorden when the input fails its checks.
MetallicFromNorden metallic_from_norden(const ChartManifold& m, const ExprMat& norden, double a,
                                        double b, const PointSample& s, double tol = 1e-9);

// +-(2J - pI)/sqrt(-(p^2+4q)) for a metallic Norden structure (discriminant
// < 0); verifies the square is -I and g-symmetry over the sample. Throws
// WrongDiscriminant when p^2 + 4q >= 0.
ExprMat norden_from_metallic(const ChartManifold& m, int sign, const PointSample& s,
                             double tol = 1e-9);

}  // namespace metallic
