#include "metallic/connections.hpp"

#include <cmath>
#include <limits>

namespace metallic {

ChristoffelField levi_civita(const ChartManifold& m) {
  const int n = m.dim;
  const ExprMat ginv = sym_inverse(m.g);

  // precompute d_m g_{jk}
  std::vector<ExprMat> dg;
  dg.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) dg.push_back(m.g.derivative(k));

  ChristoffelField gamma(n);
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Expr s = Expr::constant(0.0);
        for (int mm = 0; mm < n; ++mm) {
          Expr inner = dg[static_cast<std::size_t>(j)](mm, k) +
                       dg[static_cast<std::size_t>(k)](mm, j) -
                       dg[static_cast<std::size_t>(mm)](j, k);
          s = s + ginv(l, mm) * inner;
        }
        gamma.at(l, j, k) = (Expr::constant(0.5) * s).simplified();
      }
  return gamma;
}

ConnectionField to_connection(const ChristoffelField& gamma) {
  ConnectionField c(gamma.dim);
  c.coeff = gamma.coeff;
  return c;
}

Tensor12Field covariant_derivative_endo(const ExprMat& J, const ConnectionField& c) {
  const int n = c.dim;
  std::vector<ExprMat> dJ;
  dJ.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) dJ.push_back(J.derivative(k));

  Tensor12Field nabla(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Expr s = dJ[static_cast<std::size_t>(i)](k, j);
        for (int m = 0; m < n; ++m)
          s = s + c.at(k, i, m) * J(m, j) - c.at(m, i, j) * J(k, m);
        nabla.at(k, i, j) = s.simplified();
      }
  return nabla;
}

Tensor12Field nijenhuis_bracket(const ExprMat& J) {
  const int n = J.rows();
  std::vector<ExprMat> dJ;
  dJ.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) dJ.push_back(J.derivative(k));
  auto d = [&](int s, int k, int j) -> const Expr& { return dJ[static_cast<std::size_t>(s)](k, j); };

  Tensor12Field nij(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Expr s = Expr::constant(0.0);
        for (int m = 0; m < n; ++m) {
          s = s + J(m, i) * d(m, k, j) - J(m, j) * d(m, k, i) +
              J(k, m) * d(j, m, i) - J(k, m) * d(i, m, j);
        }
        nij.at(k, i, j) = s.simplified();
      }
  return nij;
}

Tensor12Field nijenhuis_via_connection(const ExprMat& J, const ChristoffelField& gamma) {
  const int n = gamma.dim;
  const Tensor12Field nabla = covariant_derivative_endo(J, to_connection(gamma));
  Tensor12Field nij(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Expr s = Expr::constant(0.0);
        for (int m = 0; m < n; ++m) {
          s = s + J(m, i) * nabla.at(k, m, j) - J(m, j) * nabla.at(k, m, i) +
              J(k, m) * nabla.at(m, j, i) - J(k, m) * nabla.at(m, i, j);
        }
        nij.at(k, i, j) = s.simplified();
      }
  return nij;
}

CurvatureField riemann(const ConnectionField& c) {
  const int n = c.dim;
  CurvatureField r(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          Expr s = c.at(l, j, k).derivative(i) - c.at(l, i, k).derivative(j);
          for (int m = 0; m < n; ++m)
            s = s + c.at(l, i, m) * c.at(m, j, k) - c.at(l, j, m) * c.at(m, i, k);
          r.at(l, i, j, k) = s.simplified();
        }
  return r;
}

ConnectionField natural_connection(const ChartManifold& m, const ChristoffelField& gamma) {
  const double d = m.discriminant();
  if (d == 0.0) throw ZeroDiscriminant("natural connection needs p^2 + 4q != 0");
  const int n = m.dim;
  const Tensor12Field nabla = covariant_derivative_endo(m.J, to_connection(gamma));
  const double w2 = 2.0 / d;
  const double wp = m.p / d;

  ConnectionField c(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Expr s = gamma.at(k, i, j) - Expr::constant(wp) * nabla.at(k, i, j);
        for (int mm = 0; mm < n; ++mm)
          s = s + Expr::constant(w2) * m.J(k, mm) * nabla.at(mm, i, j);
        c.at(k, i, j) = s.simplified();
      }
  return c;
}

namespace {

double eval_connection_dj(const ChartManifold& m, const ConnectionField& c,
                          const PointSample& s) {
  const int n = m.dim;
  std::vector<ExprMat> dJ;
  for (int k = 0; k < n; ++k) dJ.push_back(m.J.derivative(k));
  double err = 0.0;
  for (const auto& x : s.points) {
    const Mat j = m.J.eval(x);
    std::vector<Mat> dj;
    for (int k = 0; k < n; ++k) dj.push_back(dJ[static_cast<std::size_t>(k)].eval(x));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int jj = 0; jj < n; ++jj) {
          double v = dj[static_cast<std::size_t>(i)](k, jj);
          for (int mm = 0; mm < n; ++mm)
            v += c.at(k, i, mm).eval(x) * j(mm, jj) - c.at(mm, i, jj).eval(x) * j(k, mm);
          err = std::max(err, std::abs(v));
        }
  }
  return err;
}

double eval_connection_dg(const ChartManifold& m, const ConnectionField& c,
                          const PointSample& s) {
  const int n = m.dim;
  std::vector<ExprMat> dG;
  for (int k = 0; k < n; ++k) dG.push_back(m.g.derivative(k));
  double err = 0.0;
  for (const auto& x : s.points) {
    const Mat g = m.g.eval(x);
    for (int i = 0; i < n; ++i) {
      const Mat dg = dG[static_cast<std::size_t>(i)].eval(x);
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double v = dg(j, k);
          for (int mm = 0; mm < n; ++mm)
            v -= c.at(mm, i, j).eval(x) * g(mm, k) + c.at(mm, i, k).eval(x) * g(j, mm);
          err = std::max(err, std::abs(v));
        }
    }
  }
  return err;
}

}  // namespace

std::pair<CheckReport, CheckReport> check_natural_connection(const ChartManifold& m,
                                                             const PointSample& s, double tol) {
  const ChristoffelField gamma = levi_civita(m);
  const ConnectionField c = natural_connection(m, gamma);
  const double edj = eval_connection_dj(m, c, s);
  const double edg = eval_connection_dg(m, c, s);
  return {CheckReport::make("conn.natural_dj", m.name, s.count, edj, tol),
          CheckReport::make("conn.natural_dg", m.name, s.count, edg, tol)};
}

Tensor12Field torsion_of(const ConnectionField& c) {
  const int n = c.dim;
  Tensor12Field t(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        t.at(k, i, j) = (c.at(k, i, j) - c.at(k, j, i)).simplified();
  return t;
}

CheckReport check_torsion_formula(const ChartManifold& m, const PointSample& s, double tol) {
  const double d = m.discriminant();
  if (d == 0.0) throw ZeroDiscriminant("torsion formula needs p^2 + 4q != 0");
  const int n = m.dim;
  const ChristoffelField gamma = levi_civita(m);
  const ConnectionField c = natural_connection(m, gamma);
  const Tensor12Field t = torsion_of(c);
  const Tensor12Field nabla = covariant_derivative_endo(m.J, to_connection(gamma));

  double err = 0.0;
  for (const auto& x : s.points) {
    const Mat j = m.J.eval(x);
    // A^k_{ij} = (nabla_i J)^k_j + J^k_s Gamma^s_{ij}; covariant derivative of
    // the vector field J d_j in direction d_i.
    std::vector<double> a(static_cast<std::size_t>(n * n * n));
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int jj = 0; jj < n; ++jj) {
          double v = nabla.at(k, i, jj).eval(x);
          for (int mm = 0; mm < n; ++mm) v += j(k, mm) * gamma.at(mm, i, jj).eval(x);
          a[static_cast<std::size_t>((k * n + i) * n + jj)] = v;
        }
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int jj = 0; jj < n; ++jj) {
          double closed = 0.0;
          for (int mm = 0; mm < n; ++mm) {
            const double w = a[static_cast<std::size_t>((mm * n + i) * n + jj)] -
                             a[static_cast<std::size_t>((mm * n + jj) * n + i)];
            closed += (2.0 * j(k, mm) - (mm == k ? m.p : 0.0)) * w;
          }
          closed /= d;
          err = std::max(err, std::abs(closed - t.at(k, i, jj).eval(x)));
        }
  }
  return CheckReport::make("conn.torsion_formula", m.name, s.count, err, tol);
}

CheckReport check_torsion_identity(const ChartManifold& m, const PointSample& s, double tol) {
  const double d = m.discriminant();
  if (d == 0.0) throw ZeroDiscriminant("torsion identity needs p^2 + 4q != 0");
  const int n = m.dim;
  const ChristoffelField gamma = levi_civita(m);
  const Tensor12Field t = torsion_of(natural_connection(m, gamma));
  const Tensor12Field nij = nijenhuis_bracket(m.J);

  double err = 0.0;
  for (const auto& x : s.points) {
    const Mat j = m.J.eval(x);
    std::vector<double> tv(static_cast<std::size_t>(n * n * n)),
        nv(static_cast<std::size_t>(n * n * n));
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int jj = 0; jj < n; ++jj) {
          tv[static_cast<std::size_t>((k * n + i) * n + jj)] = t.at(k, i, jj).eval(x);
          nv[static_cast<std::size_t>((k * n + i) * n + jj)] = nij.at(k, i, jj).eval(x);
        }
    auto tt = [&](int k, int i, int jj) { return tv[static_cast<std::size_t>((k * n + i) * n + jj)]; };
    auto nn = [&](int k, int i, int jj) { return nv[static_cast<std::size_t>((k * n + i) * n + jj)]; };
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int jj = 0; jj < n; ++jj) {
          double lhs = -m.p * tt(k, i, jj);
          double rhs = -m.p * nn(k, i, jj);
          for (int mm = 0; mm < n; ++mm) {
            lhs += j(mm, i) * tt(k, mm, jj) + j(mm, jj) * tt(k, i, mm);
            rhs += 2.0 * j(k, mm) * nn(mm, i, jj);
          }
          err = std::max(err, std::abs(lhs - rhs));
        }
  }
  return CheckReport::make("conn.torsion_identity", m.name, s.count, err, tol);
}

StructureFlags classify(const ChartManifold& m, const PointSample& s, double tol) {
  const int n = m.dim;
  const ChristoffelField gamma = levi_civita(m);
  const Tensor12Field nabla = covariant_derivative_endo(m.J, to_connection(gamma));
  const Tensor12Field nij = nijenhuis_bracket(m.J);
  const CurvatureField r = riemann(to_connection(gamma));

  StructureFlags f;
  f.half_trace_eigen_gap = std::numeric_limits<double>::infinity();
  for (const auto& x : s.points) {
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double nb = nabla.at(k, i, j).eval(x);
          f.max_nabla_j = std::max(f.max_nabla_j, std::abs(nb));
          f.max_sym_nabla_j = std::max(
              f.max_sym_nabla_j, std::abs(nb + nabla.at(k, j, i).eval(x)));
          f.max_nijenhuis = std::max(f.max_nijenhuis, std::abs(nij.at(k, i, j).eval(x)));
          for (int l = 0; l < n; ++l)
            f.max_curvature = std::max(f.max_curvature, std::abs(r.at(l, k, i, j).eval(x)));
        }
    const Mat j = m.J.eval(x);
    Mat shifted = j - (m.p / 2.0) * Mat::identity(n);
    f.half_trace_eigen_gap = std::min(f.half_trace_eigen_gap, std::abs(determinant(shifted)));
  }
  f.integrable = f.max_nijenhuis <= tol;
  f.locally_metallic = f.max_nabla_j <= tol;
  f.nearly_locally_metallic = f.max_sym_nabla_j <= tol;
  f.flat = f.max_curvature <= tol;

  if (f.nearly_locally_metallic && m.discriminant() > 0.0) {
    // N(d_i, d_j) = 2 (2J - pI) (nabla_j J) d_i
    double err = 0.0;
    for (const auto& x : s.points) {
      const Mat j = m.J.eval(x);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int jj = 0; jj < n; ++jj) {
            double rhs = -2.0 * m.p * nabla.at(k, jj, i).eval(x);
            for (int mm = 0; mm < n; ++mm)
              rhs += 4.0 * j(k, mm) * nabla.at(mm, jj, i).eval(x);
            err = std::max(err, std::abs(nij.at(k, i, jj).eval(x) - rhs));
          }
    }
    f.nearly_identity_residual = err;
  }
  return f;
}

}  // namespace metallic
