#pragma once

#include <utility>

#include "metallic/manifold.hpp"

namespace metallic {

// Index conventions used throughout:
//   connection coefficients C^k_{ij}: i is the derivative direction,
//     (D_i Y)^k = d_i Y^k + C^k_{is} Y^s,  (D_i b)_j = d_i b_j - C^s_{ij} b_s
//   (1,2)-tensor K^k_{ij} stored at (k, i, j); for covariant derivatives of
//     an endomorphism, K^k_{ij} = (D_i J)^k_j
//   curvature R(d_i, d_j) d_k = R^l_{ijk} d_l with
//     R^l_{ijk} = d_i C^l_{jk} - d_j C^l_{ik} + C^l_{im} C^m_{jk} - C^l_{jm} C^m_{ik}

struct ChristoffelField {
  int dim = 0;
  std::vector<Expr> coeff;  // Gamma^k_{ij}, symmetric in (i, j)

  ChristoffelField() = default;
  explicit ChristoffelField(int n) : dim(n), coeff(static_cast<std::size_t>(n * n * n)) {}
  Expr& at(int k, int i, int j) { return coeff[static_cast<std::size_t>((k * dim + i) * dim + j)]; }
  const Expr& at(int k, int i, int j) const {
    return coeff[static_cast<std::size_t>((k * dim + i) * dim + j)];
  }
};

struct ConnectionField {
  int dim = 0;
  std::vector<Expr> coeff;  // C^k_{ij}, not necessarily symmetric

  ConnectionField() = default;
  explicit ConnectionField(int n) : dim(n), coeff(static_cast<std::size_t>(n * n * n)) {}
  Expr& at(int k, int i, int j) { return coeff[static_cast<std::size_t>((k * dim + i) * dim + j)]; }
  const Expr& at(int k, int i, int j) const {
    return coeff[static_cast<std::size_t>((k * dim + i) * dim + j)];
  }
};

struct Tensor12Field {
  int dim = 0;
  std::vector<Expr> comp;  // K^k_{ij}

  Tensor12Field() = default;
  explicit Tensor12Field(int n) : dim(n), comp(static_cast<std::size_t>(n * n * n)) {}
  Expr& at(int k, int i, int j) { return comp[static_cast<std::size_t>((k * dim + i) * dim + j)]; }
  const Expr& at(int k, int i, int j) const {
    return comp[static_cast<std::size_t>((k * dim + i) * dim + j)];
  }
};

struct CurvatureField {
  int dim = 0;
  std::vector<Expr> comp;  // R^l_{ijk}

  CurvatureField() = default;
  explicit CurvatureField(int n) : dim(n), comp(static_cast<std::size_t>(n * n * n * n)) {}
  Expr& at(int l, int i, int j, int k) {
    return comp[static_cast<std::size_t>(((l * dim + i) * dim + j) * dim + k)];
  }
  const Expr& at(int l, int i, int j, int k) const {
    return comp[static_cast<std::size_t>(((l * dim + i) * dim + j) * dim + k)];
  }
};

// Gamma^l_{jk} = (1/2) g^{lm} (d_j g_{mk} + d_k g_{mj} - d_m g_{jk}).
ChristoffelField levi_civita(const ChartManifold& m);
ConnectionField to_connection(const ChristoffelField& gamma);

// (D_i J)^k_j = d_i J^k_j + C^k_{is} J^s_j - C^s_{ij} J^k_s.
Tensor12Field covariant_derivative_endo(const ExprMat& J, const ConnectionField& c);

// N^k_{ij} = J^s_i d_s J^k_j - J^s_j d_s J^k_i + J^k_s d_j J^s_i - J^k_s d_i J^s_j.
Tensor12Field nijenhuis_bracket(const ExprMat& J);

// Torsion-free-connection form of the same tensor:
// N^k_{ij} = J^s_i (D_s J)^k_j - J^s_j (D_s J)^k_i + J^k_s (D_j J)^s_i - J^k_s (D_i J)^s_j.
Tensor12Field nijenhuis_via_connection(const ExprMat& J, const ChristoffelField& gamma);

CurvatureField riemann(const ConnectionField& c);

// C = Gamma + 2/(p^2+4q) * J (nabla J) - p/(p^2+4q) * (nabla J); makes both
// J and g parallel. Throws ZeroDiscriminant when p^2 + 4q = 0.
ConnectionField natural_connection(const ChartManifold& m, const ChristoffelField& gamma);

// Residuals of D J = 0 and D g = 0 for the natural connection.
std::pair<CheckReport, CheckReport> check_natural_connection(const ChartManifold& m,
                                                             const PointSample& s, double tol);

Tensor12Field torsion_of(const ConnectionField& c);

// Compares C^k_{ij} - C^k_{ji} against the closed torsion expression
// 1/(p^2+4q) * (2J - pI)(nabla_i (J d_j) - nabla_j (J d_i)) on coordinate
// fields.
CheckReport check_torsion_formula(const ChartManifold& m, const PointSample& s, double tol);

// T(J d_i, d_j) + T(d_i, J d_j) - p T(d_i, d_j) = (2J - pI) N(d_i, d_j).
CheckReport check_torsion_identity(const ChartManifold& m, const PointSample& s, double tol);

struct StructureFlags {
  bool integrable = false;
  bool locally_metallic = false;
  bool nearly_locally_metallic = false;
  bool flat = false;
  double max_nijenhuis = 0.0;
  double max_nabla_j = 0.0;
  double max_sym_nabla_j = 0.0;
  double max_curvature = 0.0;
  // residual of N = 2(2J - pI)(nabla J) when the nearly flag holds with a
  // positive discriminant; 0 otherwise
  double nearly_identity_residual = 0.0;
  // diagnostic: min over the sample of |det(J - (p/2) I)|; positive means
  // p/2 stays away from the spectrum of J
  double half_trace_eigen_gap = 0.0;
};

StructureFlags classify(const ChartManifold& m, const PointSample& s, double tol);

}  // namespace metallic
