#include <doctest.h>

#include <cmath>

#include "metallic/connections.hpp"
#include "metallic/examples.hpp"
#include "support.hpp"

using namespace metallic;

namespace {

double max_component(const Tensor12Field& t, const PointSample& s) {
  double m = 0.0;
  for (const auto& x : s.points)
    for (int k = 0; k < t.dim; ++k)
      for (int i = 0; i < t.dim; ++i)
        for (int j = 0; j < t.dim; ++j) m = std::max(m, std::abs(t.at(k, i, j).eval(x)));
  return m;
}

double max_component(const CurvatureField& r, const PointSample& s) {
  double m = 0.0;
  for (const auto& x : s.points)
    for (int l = 0; l < r.dim; ++l)
      for (int i = 0; i < r.dim; ++i)
        for (int j = 0; j < r.dim; ++j)
          for (int k = 0; k < r.dim; ++k) m = std::max(m, std::abs(r.at(l, i, j, k).eval(x)));
  return m;
}

double max_diff(const Tensor12Field& a, const Tensor12Field& b, const PointSample& s) {
  double m = 0.0;
  for (const auto& x : s.points)
    for (int k = 0; k < a.dim; ++k)
      for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j < a.dim; ++j)
          m = std::max(m, std::abs(a.at(k, i, j).eval(x) - b.at(k, i, j).eval(x)));
  return m;
}

}  // namespace

TEST_SUITE("connections") {

TEST_CASE("Christoffel symbols vanish for constant metrics") {
  const ChartManifold e1 = load_example("E1");
  const ChristoffelField gamma = levi_civita(e1);
  const PointSample s = sample_points(e1, 42, 50);
  for (const auto& x : s.points)
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(gamma.at(k, i, j).eval(x) == 0.0);
}

TEST_CASE("polar-type metric has the expected Christoffel symbols") {
  const ChartManifold e3 = load_example("E3");
  const ChristoffelField gamma = levi_civita(e3);
  const PointSample s = sample_points(e3, 7, 40);
  for (const auto& x : s.points) {
    const double u = x[0];
    CHECK(gamma.at(0, 1, 1).eval(x) == doctest::Approx(-u).epsilon(1e-14));
    CHECK(gamma.at(1, 0, 1).eval(x) == doctest::Approx(1.0 / u).epsilon(1e-14));
    CHECK(gamma.at(1, 1, 0).eval(x) == doctest::Approx(1.0 / u).epsilon(1e-14));
    CHECK(gamma.at(0, 0, 0).eval(x) == 0.0);
    CHECK(gamma.at(0, 0, 1).eval(x) == 0.0);
    CHECK(gamma.at(1, 0, 0).eval(x) == 0.0);
    CHECK(gamma.at(1, 1, 1).eval(x) == 0.0);
  }
}

TEST_CASE("sphere-type metric has the expected Christoffel symbols") {
  const ChartManifold e4 = load_example("E4");
  const ChristoffelField gamma = levi_civita(e4);
  const PointSample s = sample_points(e4, 7, 40);
  for (const auto& x : s.points) {
    const double u = x[0];
    CHECK(gamma.at(0, 1, 1).eval(x) ==
          doctest::Approx(-std::sin(u) * std::cos(u)).epsilon(1e-13));
    CHECK(gamma.at(1, 0, 1).eval(x) ==
          doctest::Approx(std::cos(u) / std::sin(u)).epsilon(1e-13));
  }
}

TEST_CASE("Levi-Civita symbols agree with the defining finite-difference formula") {
  for (const char* id : {"E3", "E4"}) {
    const ChartManifold m = load_example(id);
    const ChristoffelField gamma = levi_civita(m);
    const int n = m.dim;
    // probe a few interior points
    const std::vector<std::vector<double>> probes{{1.3, 0.5}, {1.6, 0.2}};
    const std::vector<std::vector<double>> probes4{{0.7, 0.5}, {0.9, 0.2}};
    for (const auto& x : (std::string(id) == "E3" ? probes : probes4)) {
      const Mat ginv = inverse_metric_at(m, x);
      for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            double fd_value = 0.0;
            for (int mm = 0; mm < n; ++mm) {
              auto gmk = [&](std::span<const double> p) { return m.g(mm, k).eval(p); };
              auto gmj = [&](std::span<const double> p) { return m.g(mm, j).eval(p); };
              auto gjk = [&](std::span<const double> p) { return m.g(j, k).eval(p); };
              fd_value += 0.5 * ginv(l, mm) *
                          (fd_partial(gmk, x, j, 1e-5) + fd_partial(gmj, x, k, 1e-5) -
                           fd_partial(gjk, x, mm, 1e-5));
            }
            CHECK(std::abs(fd_value - gamma.at(l, j, k).eval(x)) <= 1e-6);
          }
    }
  }
}

TEST_CASE("covariant derivative of the structure") {
  const PointSample s1 = sample_points(load_example("E1"), 42, 50);
  const ChartManifold e1 = load_example("E1");
  const Tensor12Field n1 = covariant_derivative_endo(e1.J, to_connection(levi_civita(e1)));
  CHECK(max_component(n1, s1) == 0.0);

  // trivial structures stay parallel even with nonzero symbols
  const ChartManifold e3 = load_example("E3");
  const PointSample s3 = sample_points(e3, 42, 50);
  const Tensor12Field n3 = covariant_derivative_endo(e3.J, to_connection(levi_civita(e3)));
  CHECK(max_component(n3, s3) <= 1e-15);

  for (const char* id : {"E2", "E4"}) {
    const ChartManifold m = load_example(id);
    const PointSample s = sample_points(m, 42, 50);
    const ChristoffelField gamma = levi_civita(m);
    const Tensor12Field nabla = covariant_derivative_endo(m.J, to_connection(gamma));
    CHECK(max_component(nabla, s) > 0.1);  // genuinely non-parallel

    // finite-difference cross-check of the defining formula
    const std::vector<double> x = std::string(id) == "E2" ? std::vector<double>{0.3, -0.2}
                                                          : std::vector<double>{0.75, 0.5};
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j) {
          auto jkj = [&](std::span<const double> p) { return m.J(k, j).eval(p); };
          double v = fd_partial(jkj, x, i, 1e-5);
          for (int mm = 0; mm < 2; ++mm)
            v += gamma.at(k, i, mm).eval(x) * m.J(mm, j).eval(x) -
                 gamma.at(mm, i, j).eval(x) * m.J(k, mm).eval(x);
          CHECK(std::abs(v - nabla.at(k, i, j).eval(x)) <= 1e-6 * (1.0 + std::abs(v)));
        }
  }
}

TEST_CASE("Nijenhuis tensor vanishes for constant and trivial structures") {
  const ChartManifold e1 = load_example("E1");
  const PointSample s1 = sample_points(e1, 42, 50);
  CHECK(max_component(nijenhuis_bracket(e1.J), s1) == 0.0);
  CHECK(max_component(nijenhuis_via_connection(e1.J, levi_civita(e1)), s1) == 0.0);

  const ChartManifold e3 = load_example("E3");
  const PointSample s3 = sample_points(e3, 42, 50);
  CHECK(max_component(nijenhuis_bracket(e3.J), s3) == 0.0);
  CHECK(max_component(nijenhuis_via_connection(e3.J, levi_civita(e3)), s3) <= 1e-15);
}

TEST_CASE("bracket and connection forms of the Nijenhuis tensor agree") {
  for (const char* id : {"E1", "E2", "E3", "E4"}) {
    const ChartManifold m = load_example(id);
    const PointSample s = sample_points(m, 42, 200);
    const Tensor12Field a = nijenhuis_bracket(m.J);
    const Tensor12Field b = nijenhuis_via_connection(m.J, levi_civita(m));
    CHECK(max_diff(a, b, s) <= 1e-9);
  }
  // Every two-dimensional polynomial structure is integrable (its
  // eigendistributions are line fields), so the non-vacuous agreement test
  // uses an arbitrary endomorphism field; both formulas are defined for any
  // (1,1)-tensor with a torsion-free connection.
  const ChartManifold host = load_example("E2");
  ExprMat arbitrary(2, 2);
  const std::vector<std::string> coords{"u", "v"};
  arbitrary(0, 0) = parse_expression("0", coords);
  arbitrary(0, 1) = parse_expression("1", coords);
  arbitrary(1, 0) = parse_expression("u", coords);
  arbitrary(1, 1) = parse_expression("0", coords);
  const PointSample s = sample_points(host, 42, 200);
  const Tensor12Field a = nijenhuis_bracket(arbitrary);
  const Tensor12Field b = nijenhuis_via_connection(arbitrary, levi_civita(host));
  CHECK(max_diff(a, b, s) <= 1e-9);
  CHECK(max_component(a, s) > 0.5);  // the cross-check is not vacuous
}

TEST_CASE("curvature: flat examples vanish, the sphere has unit sectional curvature") {
  for (const char* id : {"E1", "E3"}) {
    const ChartManifold m = load_example(id);
    const PointSample s = sample_points(m, 42, 100);
    CHECK(max_component(riemann(to_connection(levi_civita(m))), s) <= 1e-10);
  }

  const ChartManifold e4 = load_example("E4");
  const PointSample s = sample_points(e4, 42, 100);
  const CurvatureField r = riemann(to_connection(levi_civita(e4)));
  for (const auto& x : s.points) {
    const Mat g = metric_at(e4, x);
    // g(R(d1,d2)d2, d1) / (g11 g22 - g12^2)
    double num = 0.0;
    for (int l = 0; l < 2; ++l) num += g(l, 0) * r.at(l, 0, 1, 1).eval(x);
    const double den = g(0, 0) * g(1, 1) - g(0, 1) * g(0, 1);
    CHECK(num / den == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("curvature identities hold at samples") {
  for (const char* id : {"E3", "E4"}) {
    const ChartManifold m = load_example(id);
    const PointSample s = sample_points(m, 42, 100);
    const CurvatureField r = riemann(to_connection(levi_civita(m)));
    const int n = m.dim;
    for (const auto& x : s.points) {
      const Mat g = metric_at(m, x);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            for (int l = 0; l < n; ++l) {
              CHECK(std::abs(r.at(l, i, j, k).eval(x) + r.at(l, j, i, k).eval(x)) <= 1e-12);
              CHECK(std::abs(r.at(l, i, j, k).eval(x) + r.at(l, j, k, i).eval(x) +
                             r.at(l, k, i, j).eval(x)) <= 1e-12);
              double rl = 0.0, rk = 0.0;
              for (int mm = 0; mm < n; ++mm) {
                rl += g(l, mm) * r.at(mm, i, j, k).eval(x);
                rk += g(k, mm) * r.at(mm, i, j, l).eval(x);
              }
              CHECK(std::abs(rl + rk) <= 1e-9);
            }
          }
    }
  }
}

TEST_CASE("natural connection equals Levi-Civita exactly when the structure is parallel") {
  for (const char* id : {"E1", "E3"}) {
    const ChartManifold m = load_example(id);
    const ChristoffelField gamma = levi_civita(m);
    const ConnectionField c = natural_connection(m, gamma);
    const PointSample s = sample_points(m, 42, 50);
    for (const auto& x : s.points)
      for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            CHECK(std::abs(c.at(k, i, j).eval(x) - gamma.at(k, i, j).eval(x)) <= 1e-15);
  }
}

TEST_CASE("natural connection makes the structure and the metric parallel") {
  for (const char* id : {"E1", "E2", "E3", "E4"}) {
    const ChartManifold m = load_example(id);
    const PointSample s = sample_points(m, 42, 200);
    const auto [dj, dg] = check_natural_connection(m, s, 1e-9);
    CHECK(dj.pass);
    CHECK(dg.pass);
  }
  // non-trivially: E2 and E4 have C != Gamma
  for (const char* id : {"E2", "E4"}) {
    const ChartManifold m = load_example(id);
    const ChristoffelField gamma = levi_civita(m);
    const ConnectionField c = natural_connection(m, gamma);
    const PointSample s = sample_points(m, 42, 20);
    double diff = 0.0;
    for (const auto& x : s.points)
      for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            diff = std::max(diff,
                            std::abs(c.at(k, i, j).eval(x) - gamma.at(k, i, j).eval(x)));
    CHECK(diff > 0.1);
  }
}

TEST_CASE("zero discriminant is rejected by the natural connection") {
  ChartManifold m = load_example("E1");
  m.p = 2.0;
  m.q = -1.0;  // d = 0
  CHECK_THROWS_AS(natural_connection(m, levi_civita(m)), ZeroDiscriminant);
}

TEST_CASE("torsion matches the closed formula and its symmetry identity") {
  for (const char* id : {"E1", "E2", "E3", "E4"}) {
    const ChartManifold m = load_example(id);
    const PointSample s = sample_points(m, 42, 200);
    CHECK(check_torsion_formula(m, s, 1e-9).pass);
    CHECK(check_torsion_identity(m, s, 1e-9).pass);
  }
  // torsion actually vanishes when the structure is parallel
  for (const char* id : {"E1", "E3"}) {
    const ChartManifold m = load_example(id);
    const PointSample s = sample_points(m, 42, 50);
    CHECK(max_component(torsion_of(natural_connection(m, levi_civita(m))), s) <= 1e-15);
  }
  // and does not vanish on E2
  const ChartManifold e2 = load_example("E2");
  const PointSample s2 = sample_points(e2, 42, 50);
  CHECK(max_component(torsion_of(natural_connection(e2, levi_civita(e2))), s2) > 0.05);
}

TEST_CASE("torsion components are antisymmetric") {
  const ChartManifold e4 = load_example("E4");
  const Tensor12Field t = torsion_of(natural_connection(e4, levi_civita(e4)));
  const PointSample s = sample_points(e4, 42, 50);
  for (const auto& x : s.points)
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          CHECK(t.at(k, i, j).eval(x) == doctest::Approx(-t.at(k, j, i).eval(x)).epsilon(1e-15));
}

TEST_CASE("classification flags per example") {
  const PointSample s1 = sample_points(load_example("E1"), 42, 200);
  const StructureFlags f1 = classify(load_example("E1"), s1, 1e-9);
  CHECK(f1.integrable);
  CHECK(f1.locally_metallic);
  CHECK(f1.nearly_locally_metallic);
  CHECK(f1.flat);

  const StructureFlags f3 = classify(load_example("E3"), sample_points(load_example("E3"), 42, 200), 1e-9);
  CHECK(f3.integrable);
  CHECK(f3.locally_metallic);
  CHECK(f3.flat);

  const StructureFlags f4 = classify(load_example("E4"), sample_points(load_example("E4"), 42, 200), 1e-9);
  CHECK_FALSE(f4.locally_metallic);
  CHECK_FALSE(f4.flat);

  const StructureFlags f2 = classify(load_example("E2"), sample_points(load_example("E2"), 42, 200), 1e-9);
  CHECK_FALSE(f2.locally_metallic);
  CHECK(f2.flat);
  // the implication locally metallic => integrable over all examples
  for (const StructureFlags& f : {f1, f2, f3, f4})
    if (f.locally_metallic) CHECK(f.integrable);
  // half-spectrum gap diagnostic: positive for valid metallic structures
  CHECK(f1.half_trace_eigen_gap > 0.1);
  CHECK(f4.half_trace_eigen_gap > 0.1);
}

TEST_CASE("nearly locally metallic identity holds where the flag holds") {
  for (const char* id : {"E1", "E3"}) {
    const ChartManifold m = load_example(id);
    const PointSample s = sample_points(m, 42, 100);
    const StructureFlags f = classify(m, s, 1e-9);
    if (f.nearly_locally_metallic && m.discriminant() > 0.0)
      CHECK(f.nearly_identity_residual <= 1e-9);
  }
}

TEST_CASE("degenerate parameter limit reproduces the canonical Norden connection") {
  // p=0, q=-1: C = Gamma - (1/2) J (nabla J). The constant-structure case is
  // trivial (everything vanishes); the coordinate-dependent fixture is not.
  {
    const ChartManifold e1n = load_manifest(testing_support::kConstantNordenManifest);
    const ChristoffelField gamma0 = levi_civita(e1n);
    const ConnectionField c0 = natural_connection(e1n, gamma0);
    const PointSample s0 = sample_points(e1n, 42, 50);
    for (const auto& x : s0.points)
      for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) CHECK(c0.at(k, i, j).eval(x) == 0.0);
  }

  const ChartManifold n1 = load_manifest(testing_support::kNordenManifest);
  REQUIRE(n1.p == 0.0);
  REQUIRE(n1.q == -1.0);
  const ChristoffelField gamma = levi_civita(n1);
  const ConnectionField c = natural_connection(n1, gamma);
  const Tensor12Field nabla = covariant_derivative_endo(n1.J, to_connection(gamma));
  const PointSample s = sample_points(n1, 42, 200);
  double err = 0.0;
  double size = 0.0;
  for (const auto& x : s.points) {
    const Mat j = structure_at(n1, x);
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int jj = 0; jj < 2; ++jj) {
          double expected = gamma.at(k, i, jj).eval(x);
          for (int m = 0; m < 2; ++m) expected -= 0.5 * j(k, m) * nabla.at(m, i, jj).eval(x);
          const double got = c.at(k, i, jj).eval(x);
          err = std::max(err, std::abs(got - expected));
          size = std::max(size, std::abs(got));
        }
  }
  CHECK(err <= 1e-12);
  CHECK(size > 0.1);  // the connection differs from Levi-Civita here

  // and the connection still parallelizes structure and metric
  const auto [dj, dg] = check_natural_connection(n1, s, 1e-9);
  CHECK(dj.pass);
  CHECK(dg.pass);
}

}  // TEST_SUITE
