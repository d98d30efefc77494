#pragma once

#include <vector>

#include "metallic/connections.hpp"
#include "metallic/manifold.hpp"

namespace metallic {

// Pointwise linear algebra on the double bundle TM + T*M in the basis
// (d_1..d_n, dx^1..dx^n): a generalized endomorphism is a 2n x 2n matrix of
// blocks [[A, B], [C, E]] acting on (X, alpha) as (AX + B alpha, CX + E alpha),
// and a generalized metric is a symmetric 2n x 2n matrix in the same basis.

struct GeneralizedVector {
  Vec vec;   // X components
  Vec form;  // alpha components
};

struct GeneralizedEndo {
  Mat m;  // 2n x 2n
};

struct GeneralizedMetric {
  Mat m;  // 2n x 2n, symmetric
};

GeneralizedVector apply(const GeneralizedEndo& e, const GeneralizedVector& v);
double pair_with(const GeneralizedMetric& g, const GeneralizedVector& a,
                 const GeneralizedVector& b);

// blocks (J, 0, g, -J^T + pI); squares to p*self + q*I when J is metallic.
GeneralizedEndo hat_J(const ChartManifold& m, std::span<const double> x);
// blocks (-J + pI, 0, g, J^T)
GeneralizedEndo hat_J_prime(const ChartManifold& m, std::span<const double> x);

// blocks (J, (-J^2 + pJ + qI) g^{-1}, g, -J^T + pI): squares to p*self + q*I
// for any g-symmetric J and any real p, q. Coincides with hat_J when J is
// metallic for the same (p, q).
GeneralizedEndo check_J(const ChartManifold& m, std::span<const double> x, double p, double q);
GeneralizedEndo check_J_prime(const ChartManifold& m, std::span<const double> x, double p,
                              double q);

// blocks [[g, (pI - 2J^T)/(p^2+4q)], [., g^{-1}]]; needs p^2 + 4q != 0.
GeneralizedMetric hat_g(const ChartManifold& m, std::span<const double> x);
// blocks [[g, (p/4)I - (1/2)J^T], [., ((p^2+4q)/4) g^{-1}]]
GeneralizedMetric check_g(const ChartManifold& m, std::span<const double> x, double p, double q);
// blocks [[g, (1/2)J^T], [., g^{-1}]] for a Norden structure J
GeneralizedMetric norden_generalized_metric(const ChartManifold& m, std::span<const double> x);

// (X+alpha, Y+beta) = -1/2 (alpha(Y) - beta(X)).
double symplectic_pairing(const GeneralizedVector& a, const GeneralizedVector& b);

// (check_J s, t) + (s, check_J t) = p (s, t) over random section values at the
// sampled points; at p = 0 this is skewness of the structure for the pairing.
// Also folds in antisymmetry of the pairing itself.
CheckReport check_symplectic_identity(const ChartManifold& m, const PointSample& s, double p,
                                      double q, double tol);

// blocks (aJ + bI, 0, g, -aJ^T + bI) for a verified Norden J; squares to
// 2b*self - (a^2+b^2)*I. Throws NotNorden.
GeneralizedEndo generalized_norden_family(const ChartManifold& m, const ExprMat& norden, double a,
                                          double b, std::span<const double> x, double tol = 1e-9);

// +-(2 check_J - pI)/sqrt(-(p^2+4q)); an almost complex structure on the
// double bundle, symmetric for check_g. Throws WrongDiscriminant.
GeneralizedEndo generalized_norden_from_check(const ChartManifold& m, std::span<const double> x,
                                              double p, double q, int sign);

// ---------------------------------------------------------------------------
// Symbolic sections of TM + T*M and the induced connection that applies the
// natural connection to both factors:
//   D^_{X+alpha}(Y+beta) := D_X Y + D_X beta.

struct GeneralizedSectionField {
  std::vector<Expr> vec;
  std::vector<Expr> form;
};

struct GeneralizedEndoField {
  ExprMat a, b, c, e;  // same block meaning as GeneralizedEndo
};

GeneralizedEndoField hat_J_field(const ChartManifold& m);
ExprMat hat_g_field(const ChartManifold& m);  // 2n x 2n of Expr

GeneralizedSectionField apply(const GeneralizedEndoField& e, const GeneralizedSectionField& s);
GeneralizedSectionField coordinate_section(int dim, int index);  // index < n: d_i, else dx^{i-n}

// D^ in the coordinate direction i.
GeneralizedSectionField d_hat_coord(const ConnectionField& c, int i,
                                    const GeneralizedSectionField& s);
// D^ along a general section (only its vector part steers).
GeneralizedSectionField d_hat_along(const ConnectionField& c, const GeneralizedSectionField& dir,
                                    const GeneralizedSectionField& s);

// Residual reports for the induced connection: parallel structure, parallel
// metric, torsion reduction to the base torsion, and blockwise curvature
// equality with the base curvature.
std::vector<CheckReport> check_d_hat(const ChartManifold& m, const PointSample& s, double tol);

}  // namespace metallic
