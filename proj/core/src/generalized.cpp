#include "metallic/generalized.hpp"

#include <cmath>

namespace metallic {

namespace {

constexpr double kDegenerateDet = 1e-10;

Mat assemble(const Mat& a, const Mat& b, const Mat& c, const Mat& e) {
  const int n = a.rows();
  Mat m(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m(i, j) = a(i, j);
      m(i, n + j) = b(i, j);
      m(n + i, j) = c(i, j);
      m(n + i, n + j) = e(i, j);
    }
  return m;
}

Mat metric_blocks_at(const ChartManifold& m, std::span<const double> x, Mat* inv = nullptr) {
  const Mat g = m.g.eval(x);
  if (std::abs(determinant(g)) < kDegenerateDet)
    throw DegenerateMetric("metric is degenerate at the requested point of '" + m.name + "'");
  if (inv) *inv = inverse(g);
  return g;
}

}  // namespace

GeneralizedVector apply(const GeneralizedEndo& e, const GeneralizedVector& v) {
  const int n = static_cast<int>(v.vec.size());
  Vec full(static_cast<std::size_t>(2 * n));
  for (int i = 0; i < n; ++i) {
    full[static_cast<std::size_t>(i)] = v.vec[static_cast<std::size_t>(i)];
    full[static_cast<std::size_t>(n + i)] = v.form[static_cast<std::size_t>(i)];
  }
  const Vec r = e.m * full;
  GeneralizedVector out;
  out.vec.assign(r.begin(), r.begin() + n);
  out.form.assign(r.begin() + n, r.end());
  return out;
}

double pair_with(const GeneralizedMetric& g, const GeneralizedVector& a,
                 const GeneralizedVector& b) {
  const int n = static_cast<int>(a.vec.size());
  Vec fa(static_cast<std::size_t>(2 * n)), fb(static_cast<std::size_t>(2 * n));
  for (int i = 0; i < n; ++i) {
    fa[static_cast<std::size_t>(i)] = a.vec[static_cast<std::size_t>(i)];
    fa[static_cast<std::size_t>(n + i)] = a.form[static_cast<std::size_t>(i)];
    fb[static_cast<std::size_t>(i)] = b.vec[static_cast<std::size_t>(i)];
    fb[static_cast<std::size_t>(n + i)] = b.form[static_cast<std::size_t>(i)];
  }
  const Vec gb = g.m * fb;
  double s = 0.0;
  for (int i = 0; i < 2 * n; ++i) s += fa[static_cast<std::size_t>(i)] * gb[static_cast<std::size_t>(i)];
  return s;
}

GeneralizedEndo hat_J(const ChartManifold& m, std::span<const double> x) {
  const int n = m.dim;
  const Mat g = metric_blocks_at(m, x);
  const Mat j = m.J.eval(x);
  const Mat e = m.p * Mat::identity(n) - transpose(j);
  return {assemble(j, Mat(n, n), g, e)};
}

GeneralizedEndo hat_J_prime(const ChartManifold& m, std::span<const double> x) {
  const int n = m.dim;
  const Mat g = metric_blocks_at(m, x);
  const Mat j = m.J.eval(x);
  return {assemble(m.p * Mat::identity(n) - j, Mat(n, n), g, transpose(j))};
}

GeneralizedEndo check_J(const ChartManifold& m, std::span<const double> x, double p, double q) {
  const int n = m.dim;
  Mat ginv;
  const Mat g = metric_blocks_at(m, x, &ginv);
  const Mat j = m.J.eval(x);
  const Mat poly = q * Mat::identity(n) + p * j - j * j;  // -J^2 + pJ + qI
  return {assemble(j, poly * ginv, g, p * Mat::identity(n) - transpose(j))};
}

GeneralizedEndo check_J_prime(const ChartManifold& m, std::span<const double> x, double p,
                              double q) {
  const int n = m.dim;
  Mat ginv;
  const Mat g = metric_blocks_at(m, x, &ginv);
  const Mat j = m.J.eval(x);
  const Mat poly = q * Mat::identity(n) + p * j - j * j;
  return {assemble(p * Mat::identity(n) - j, poly * ginv, g, transpose(j))};
}

GeneralizedMetric hat_g(const ChartManifold& m, std::span<const double> x) {
  const double d = m.discriminant();
  if (d == 0.0) throw ZeroDiscriminant("hat metric needs p^2 + 4q != 0");
  const int n = m.dim;
  Mat ginv;
  const Mat g = metric_blocks_at(m, x, &ginv);
  const Mat j = m.J.eval(x);
  const Mat mixed = (1.0 / d) * (m.p * Mat::identity(n) - 2.0 * transpose(j));
  Mat out = assemble(g, mixed, transpose(mixed), ginv);
  if (std::abs(determinant(out)) < kDegenerateDet)
    throw DegenerateMetric("generalized metric is degenerate at the requested point");
  return {out};
}

GeneralizedMetric check_g(const ChartManifold& m, std::span<const double> x, double p, double q) {
  const int n = m.dim;
  Mat ginv;
  const Mat g = metric_blocks_at(m, x, &ginv);
  const Mat j = m.J.eval(x);
  const Mat mixed = (p / 4.0) * Mat::identity(n) - 0.5 * transpose(j);
  const double d = p * p + 4.0 * q;
  Mat out = assemble(g, mixed, transpose(mixed), (d / 4.0) * ginv);
  if (std::abs(determinant(out)) < kDegenerateDet)
    throw DegenerateMetric("generalized metric is degenerate at the requested point");
  return {out};
}

GeneralizedMetric norden_generalized_metric(const ChartManifold& m, std::span<const double> x) {
  Mat ginv;
  const Mat g = metric_blocks_at(m, x, &ginv);
  const Mat j = m.J.eval(x);
  const Mat mixed = 0.5 * transpose(j);
  Mat out = assemble(g, mixed, transpose(mixed), ginv);
  if (std::abs(determinant(out)) < kDegenerateDet)
    throw DegenerateMetric("generalized metric is degenerate at the requested point");
  return {out};
}

double symplectic_pairing(const GeneralizedVector& a, const GeneralizedVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.vec.size(); ++i)
    s += b.form[i] * a.vec[i] - a.form[i] * b.vec[i];
  return 0.5 * s;
}

CheckReport check_symplectic_identity(const ChartManifold& m, const PointSample& s, double p,
                                      double q, double tol) {
  const int n = m.dim;
  std::uint64_t state = s.seed ^ 0x51deull;
  auto draw = [&state]() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>((state >> 33) % 200001) / 100000.0 - 1.0;
  };
  double err = 0.0;
  for (const auto& x : s.points) {
    const GeneralizedEndo e = check_J(m, x, p, q);
    for (int rep = 0; rep < 100; ++rep) {
      GeneralizedVector a, b;
      a.vec.resize(static_cast<std::size_t>(n));
      a.form.resize(static_cast<std::size_t>(n));
      b.vec.resize(static_cast<std::size_t>(n));
      b.form.resize(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        a.vec[static_cast<std::size_t>(i)] = draw();
        a.form[static_cast<std::size_t>(i)] = draw();
        b.vec[static_cast<std::size_t>(i)] = draw();
        b.form[static_cast<std::size_t>(i)] = draw();
      }
      err = std::max(err, std::abs(symplectic_pairing(apply(e, a), b) +
                                   symplectic_pairing(a, apply(e, b)) -
                                   p * symplectic_pairing(a, b)));
      err = std::max(err, std::abs(symplectic_pairing(a, b) + symplectic_pairing(b, a)));
    }
  }
  return CheckReport::make("gen.symplectic_identity", m.name, s.count, err, tol);
}

GeneralizedEndo generalized_norden_family(const ChartManifold& m, const ExprMat& norden, double a,
                                          double b, std::span<const double> x, double tol) {
  const int n = m.dim;
  const Mat g = metric_blocks_at(m, x);
  const Mat jn = norden.eval(x);
  const double nerr = std::max(inf_norm(jn * jn + Mat::identity(n)),
                               max_abs_diff(transpose(jn) * g, g * jn));
  if (nerr > tol)
    throw NotNorden("input is not a Norden structure (residual " + std::to_string(nerr) + ")");
  const Mat top = a * jn + b * Mat::identity(n);
  const Mat e = b * Mat::identity(n) - a * transpose(jn);
  return {assemble(top, Mat(n, n), g, e)};
}

GeneralizedEndo generalized_norden_from_check(const ChartManifold& m, std::span<const double> x,
                                              double p, double q, int sign) {
  const double d = p * p + 4.0 * q;
  if (!(d < 0.0))
    throw WrongDiscriminant("generalized Norden construction needs p^2 + 4q < 0");
  const GeneralizedEndo base = check_J(m, x, p, q);
  const int n2 = base.m.rows();
  const double scale = (sign >= 0 ? 1.0 : -1.0) / std::sqrt(-d);
  return {scale * (2.0 * base.m - p * Mat::identity(n2))};
}

// ---------------------------------------------------------------------------

GeneralizedEndoField hat_J_field(const ChartManifold& m) {
  const int n = m.dim;
  GeneralizedEndoField f;
  f.a = m.J;
  f.b = ExprMat::zero(n, n);
  f.c = m.g;
  f.e = (ExprMat::scalar(n, m.p) - transpose(m.J)).simplified();
  return f;
}

ExprMat hat_g_field(const ChartManifold& m) {
  const double d = m.discriminant();
  if (d == 0.0) throw ZeroDiscriminant("hat metric needs p^2 + 4q != 0");
  const int n = m.dim;
  const ExprMat ginv = sym_inverse(m.g);
  const ExprMat mixed =
      (Expr::constant(1.0 / d) * (ExprMat::scalar(n, m.p) - 2.0 * transpose(m.J))).simplified();
  ExprMat out(2 * n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out(i, j) = m.g(i, j);
      out(i, n + j) = mixed(i, j);
      out(n + i, j) = mixed(j, i);
      out(n + i, n + j) = ginv(i, j);
    }
  return out;
}

GeneralizedSectionField apply(const GeneralizedEndoField& e, const GeneralizedSectionField& s) {
  const int n = e.a.rows();
  GeneralizedSectionField r;
  r.vec.resize(static_cast<std::size_t>(n));
  r.form.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Expr v = Expr::constant(0.0);
    Expr f = Expr::constant(0.0);
    for (int j = 0; j < n; ++j) {
      v = v + e.a(i, j) * s.vec[static_cast<std::size_t>(j)] +
          e.b(i, j) * s.form[static_cast<std::size_t>(j)];
      f = f + e.c(i, j) * s.vec[static_cast<std::size_t>(j)] +
          e.e(i, j) * s.form[static_cast<std::size_t>(j)];
    }
    r.vec[static_cast<std::size_t>(i)] = v.simplified();
    r.form[static_cast<std::size_t>(i)] = f.simplified();
  }
  return r;
}

GeneralizedSectionField coordinate_section(int dim, int index) {
  GeneralizedSectionField s;
  s.vec.assign(static_cast<std::size_t>(dim), Expr::constant(0.0));
  s.form.assign(static_cast<std::size_t>(dim), Expr::constant(0.0));
  if (index < dim)
    s.vec[static_cast<std::size_t>(index)] = Expr::constant(1.0);
  else
    s.form[static_cast<std::size_t>(index - dim)] = Expr::constant(1.0);
  return s;
}

GeneralizedSectionField d_hat_coord(const ConnectionField& c, int i,
                                    const GeneralizedSectionField& s) {
  const int n = c.dim;
  GeneralizedSectionField r;
  r.vec.resize(static_cast<std::size_t>(n));
  r.form.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    Expr v = s.vec[static_cast<std::size_t>(k)].derivative(i);
    Expr f = s.form[static_cast<std::size_t>(k)].derivative(i);
    for (int m = 0; m < n; ++m) {
      v = v + c.at(k, i, m) * s.vec[static_cast<std::size_t>(m)];
      f = f - c.at(m, i, k) * s.form[static_cast<std::size_t>(m)];
    }
    r.vec[static_cast<std::size_t>(k)] = v.simplified();
    r.form[static_cast<std::size_t>(k)] = f.simplified();
  }
  return r;
}

GeneralizedSectionField d_hat_along(const ConnectionField& c, const GeneralizedSectionField& dir,
                                    const GeneralizedSectionField& s) {
  const int n = c.dim;
  GeneralizedSectionField r;
  r.vec.assign(static_cast<std::size_t>(n), Expr::constant(0.0));
  r.form.assign(static_cast<std::size_t>(n), Expr::constant(0.0));
  for (int i = 0; i < n; ++i) {
    const GeneralizedSectionField di = d_hat_coord(c, i, s);
    for (int k = 0; k < n; ++k) {
      r.vec[static_cast<std::size_t>(k)] =
          r.vec[static_cast<std::size_t>(k)] + dir.vec[static_cast<std::size_t>(i)] * di.vec[static_cast<std::size_t>(k)];
      r.form[static_cast<std::size_t>(k)] =
          r.form[static_cast<std::size_t>(k)] + dir.vec[static_cast<std::size_t>(i)] * di.form[static_cast<std::size_t>(k)];
    }
  }
  for (int k = 0; k < n; ++k) {
    r.vec[static_cast<std::size_t>(k)] = r.vec[static_cast<std::size_t>(k)].simplified();
    r.form[static_cast<std::size_t>(k)] = r.form[static_cast<std::size_t>(k)].simplified();
  }
  return r;
}

namespace {

// Deterministic low-degree polynomial sections for the randomized torsion
// and curvature tests.
GeneralizedSectionField polynomial_section(int dim, std::uint64_t& state) {
  auto next = [&state]() {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return static_cast<double>((state >> 33) % 2001) / 1000.0 - 1.0;  // [-1, 1]
  };
  GeneralizedSectionField s;
  s.vec.resize(static_cast<std::size_t>(dim));
  s.form.resize(static_cast<std::size_t>(dim));
  for (int k = 0; k < dim; ++k) {
    Expr v = Expr::constant(next());
    Expr f = Expr::constant(next());
    for (int i = 0; i < dim; ++i) {
      v = v + Expr::constant(next()) * Expr::coordinate(i) +
          Expr::constant(next()) * Expr::coordinate(i) * Expr::coordinate(i);
      f = f + Expr::constant(next()) * Expr::coordinate(i) +
          Expr::constant(next()) * Expr::coordinate(i) * Expr::coordinate(i);
    }
    s.vec[static_cast<std::size_t>(k)] = v;
    s.form[static_cast<std::size_t>(k)] = f;
  }
  return s;
}

GeneralizedSectionField bracket_d(const ConnectionField& c, const GeneralizedSectionField& a,
                                  const GeneralizedSectionField& b) {
  // [X+alpha, Y+beta]_D = [X, Y] + D_X beta - D_Y alpha
  const int n = c.dim;
  GeneralizedSectionField r;
  r.vec.resize(static_cast<std::size_t>(n));
  r.form.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    Expr v = Expr::constant(0.0);
    for (int s = 0; s < n; ++s)
      v = v + a.vec[static_cast<std::size_t>(s)] * b.vec[static_cast<std::size_t>(k)].derivative(s) -
          b.vec[static_cast<std::size_t>(s)] * a.vec[static_cast<std::size_t>(k)].derivative(s);
    r.vec[static_cast<std::size_t>(k)] = v.simplified();
  }
  GeneralizedSectionField beta_only{std::vector<Expr>(static_cast<std::size_t>(n), Expr::constant(0.0)), b.form};
  GeneralizedSectionField alpha_only{std::vector<Expr>(static_cast<std::size_t>(n), Expr::constant(0.0)), a.form};
  const GeneralizedSectionField dxb = d_hat_along(c, a, beta_only);
  const GeneralizedSectionField dya = d_hat_along(c, b, alpha_only);
  for (int k = 0; k < n; ++k)
    r.form[static_cast<std::size_t>(k)] =
        (dxb.form[static_cast<std::size_t>(k)] - dya.form[static_cast<std::size_t>(k)]).simplified();
  return r;
}

}  // namespace

std::vector<CheckReport> check_d_hat(const ChartManifold& m, const PointSample& s, double tol) {
  const int n = m.dim;
  const ChristoffelField gamma = levi_civita(m);
  const ConnectionField c = natural_connection(m, gamma);
  const GeneralizedEndoField jhat = hat_J_field(m);
  const ExprMat ghat = hat_g_field(m);

  std::vector<CheckReport> out;

  // (i) parallel structure: D^_i (J^ s) - J^ (D^_i s) on coordinate sections
  {
    double err = 0.0;
    for (int a = 0; a < 2 * n; ++a) {
      const GeneralizedSectionField sec = coordinate_section(n, a);
      const GeneralizedSectionField js = apply(jhat, sec);
      for (int i = 0; i < n; ++i) {
        const GeneralizedSectionField lhs = d_hat_coord(c, i, js);
        const GeneralizedSectionField rhs = apply(jhat, d_hat_coord(c, i, sec));
        for (int k = 0; k < n; ++k) {
          const Expr dv = lhs.vec[static_cast<std::size_t>(k)] - rhs.vec[static_cast<std::size_t>(k)];
          const Expr df = lhs.form[static_cast<std::size_t>(k)] - rhs.form[static_cast<std::size_t>(k)];
          for (const auto& x : s.points) {
            err = std::max(err, std::abs(dv.eval(x)));
            err = std::max(err, std::abs(df.eval(x)));
          }
        }
      }
    }
    out.push_back(CheckReport::make("gen.dhat_dj", m.name, s.count, err, tol));
  }

  // (ii) parallel metric: Leibniz defect on coordinate sections
  {
    double err = 0.0;
    std::vector<GeneralizedSectionField> dsec;  // D^_i s_a, flattened
    for (int a = 0; a < 2 * n; ++a)
      for (int i = 0; i < n; ++i)
        dsec.push_back(d_hat_coord(c, i, coordinate_section(n, a)));
    auto component = [&](const GeneralizedSectionField& w, int idx) -> const Expr& {
      return idx < n ? w.vec[static_cast<std::size_t>(idx)] : w.form[static_cast<std::size_t>(idx - n)];
    };
    for (int a = 0; a < 2 * n; ++a)
      for (int b = 0; b < 2 * n; ++b)
        for (int i = 0; i < n; ++i) {
          Expr defect = ghat(a, b).derivative(i);
          const GeneralizedSectionField& da = dsec[static_cast<std::size_t>(a * n + i)];
          const GeneralizedSectionField& db = dsec[static_cast<std::size_t>(b * n + i)];
          for (int cidx = 0; cidx < 2 * n; ++cidx)
            defect = defect - component(da, cidx) * ghat(cidx, b) -
                     ghat(a, cidx) * component(db, cidx);
          defect = defect.simplified();
          for (const auto& x : s.points) err = std::max(err, std::abs(defect.eval(x)));
        }
    out.push_back(CheckReport::make("gen.dhat_dg", m.name, s.count, err, tol));
  }

  // (iii) torsion reduces to the base torsion on general sections
  {
    const Tensor12Field torsion = torsion_of(c);
    std::uint64_t state = 0x5eed5eed5eedull;
    double err = 0.0;
    for (int rep = 0; rep < 4; ++rep) {
      const GeneralizedSectionField sig = polynomial_section(n, state);
      const GeneralizedSectionField tau = polynomial_section(n, state);
      const GeneralizedSectionField t1 = d_hat_along(c, sig, tau);
      const GeneralizedSectionField t2 = d_hat_along(c, tau, sig);
      const GeneralizedSectionField br = bracket_d(c, sig, tau);
      for (const auto& x : s.points) {
        for (int k = 0; k < n; ++k) {
          double expected = 0.0;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              expected += sig.vec[static_cast<std::size_t>(i)].eval(x) *
                          tau.vec[static_cast<std::size_t>(j)].eval(x) * torsion.at(k, i, j).eval(x);
          const double got = t1.vec[static_cast<std::size_t>(k)].eval(x) -
                             t2.vec[static_cast<std::size_t>(k)].eval(x) -
                             br.vec[static_cast<std::size_t>(k)].eval(x);
          err = std::max(err, std::abs(got - expected));
          const double form_part = t1.form[static_cast<std::size_t>(k)].eval(x) -
                                   t2.form[static_cast<std::size_t>(k)].eval(x) -
                                   br.form[static_cast<std::size_t>(k)].eval(x);
          err = std::max(err, std::abs(form_part));
        }
      }
    }
    out.push_back(CheckReport::make("gen.dhat_torsion", m.name, s.count, err, tol));
  }

  // (iv) curvature acts blockwise as the base curvature
  {
    const CurvatureField r = riemann(c);
    double err = 0.0;
    for (int a = 0; a < 2 * n; ++a) {
      const GeneralizedSectionField sec = coordinate_section(n, a);
      std::vector<GeneralizedSectionField> dsec;
      for (int i = 0; i < n; ++i) dsec.push_back(d_hat_coord(c, i, sec));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const GeneralizedSectionField dij = d_hat_coord(c, i, dsec[static_cast<std::size_t>(j)]);
          const GeneralizedSectionField dji = d_hat_coord(c, j, dsec[static_cast<std::size_t>(i)]);
          for (const auto& x : s.points)
            for (int k = 0; k < n; ++k) {
              const double vec_part = dij.vec[static_cast<std::size_t>(k)].eval(x) -
                                      dji.vec[static_cast<std::size_t>(k)].eval(x);
              const double form_part = dij.form[static_cast<std::size_t>(k)].eval(x) -
                                       dji.form[static_cast<std::size_t>(k)].eval(x);
              const double expected_vec = a < n ? r.at(k, i, j, a).eval(x) : 0.0;
              const double expected_form = a < n ? 0.0 : -r.at(a - n, i, j, k).eval(x);
              err = std::max(err, std::abs(vec_part - expected_vec));
              err = std::max(err, std::abs(form_part - expected_form));
            }
        }
    }
    out.push_back(CheckReport::make("gen.dhat_curvature", m.name, s.count, err, tol));
  }

  return out;
}

}  // namespace metallic
