#include <doctest.h>

#include <cmath>

#include "metallic/examples.hpp"
#include "metallic/manifold.hpp"
#include "metallic/metallic.hpp"
#include "support.hpp"

using namespace metallic;
using testing_support::Rng;

TEST_SUITE("manifold") {

TEST_CASE("E1 manifest loads and its structure satisfies the matrix identities") {
  const ChartManifold m = load_example("E1");
  CHECK(m.dim == 2);
  CHECK(m.p == 2.0);
  CHECK(m.q == -2.0);
  const std::vector<double> x{0.25, -0.5};
  const Mat j = structure_at(m, x);
  CHECK(j(0, 0) == 1.0);
  CHECK(j(0, 1) == 1.0);
  CHECK(j(1, 0) == -1.0);
  CHECK(j(1, 1) == 1.0);
  const Mat res = j * j - m.p * j - m.q * Mat::identity(2);
  CHECK(inf_norm(res) == 0.0);
}

TEST_CASE("manifest schema violations are reported") {
  CHECK_THROWS_AS(load_manifest("not json at all"), SchemaError);
  CHECK_THROWS_AS(load_manifest(R"json({"dim": 2})json"), SchemaError);
  // 2x3 J matrix
  CHECK_THROWS_AS(load_manifest(R"json({
    "name": "bad", "dim": 2, "coords": ["x", "y"], "p": 1, "q": 1,
    "domain": [[0, 1], [0, 1]],
    "g": [["1", "0"], ["0", "1"]],
    "J": [["1", "0", "0"], ["0", "1", "0"]]
  })json"),
                  DimensionMismatch);
  // bad expression inside a matrix entry
  CHECK_THROWS_AS(load_manifest(R"json({
    "name": "bad", "dim": 1, "coords": ["x"], "p": 1, "q": 1,
    "domain": [[0, 1]], "g": [["1"]], "J": [["x +"]]
  })json"),
                  SyntaxError);
  CHECK_THROWS_AS(load_manifest(R"json({
    "name": "bad", "dim": 1, "coords": ["x"], "p": 1, "q": 1,
    "domain": [[0, 1]], "g": [["1"]], "J": [["zz"]]
  })json"),
                  UnknownIdentifier);
}

TEST_CASE("E4 manifest loads with golden diagonal roots") {
  const ChartManifold m = load_example("E4");
  const std::vector<double> x{0.7, 0.3};
  const Mat j = structure_at(m, x);
  // both diagonal entries are roots of t^2 = t + 1
  for (int i = 0; i < 2; ++i) {
    const double t = j(i, i);
    CHECK(std::abs(t * t - t - 1.0) < 1e-14);
  }
  const PointSample s = sample_points(m, 42, 200);
  CHECK(check_polynomial(m, s, 1e-12).pass);
}

TEST_CASE("metric evaluation and inversion") {
  const ChartManifold e1 = load_example("E1");
  const std::vector<double> x{0.1, 0.2};
  const Mat g = metric_at(e1, x);
  CHECK(g(0, 0) == 1.0);
  CHECK(g(1, 1) == -1.0);
  const Mat gi = inverse_metric_at(e1, x);
  CHECK(max_abs_diff(g, gi) == 0.0);

  const ChartManifold e4 = load_example("E4");
  const std::vector<double> u{0.5235987755982988, 0.1};  // sin u = 1/2
  const Mat g4 = metric_at(e4, u);
  CHECK(g4(1, 1) == doctest::Approx(0.25).epsilon(1e-14));
  const Mat gi4 = inverse_metric_at(e4, u);
  CHECK(gi4(1, 1) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(inf_norm(g4 * gi4 - Mat::identity(2)) < 1e-12);
}

TEST_CASE("degenerate metric raises") {
  const ChartManifold m = load_manifest(R"json({
    "name": "sing", "dim": 2, "coords": ["x", "y"], "p": 1, "q": 1,
    "domain": [[-1, 1], [-1, 1]],
    "g": [["x", "0"], ["0", "x"]],
    "J": [["1", "0"], ["0", "1"]]
  })json");
  const std::vector<double> zero{0.0, 0.5};
  CHECK_THROWS_AS(inverse_metric_at(m, zero), DegenerateMetric);
  const std::vector<double> ok{0.5, 0.5};
  CHECK(inverse_metric_at(m, ok)(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("musical isomorphisms") {
  const ChartManifold e1 = load_example("E1");
  const std::vector<double> x{0.0, 0.0};
  const Vec f1 = flat(e1, x, std::vector<double>{1.0, 0.0});
  CHECK(f1[0] == 1.0);
  CHECK(f1[1] == 0.0);
  const Vec f2 = flat(e1, x, std::vector<double>{0.0, 1.0});
  CHECK(f2[0] == 0.0);
  CHECK(f2[1] == -1.0);

  // Euclidean metric: flat is the identity on components
  const ChartManifold e2 = load_example("E2");
  const Vec f3 = flat(e2, x, std::vector<double>{0.3, -0.7});
  CHECK(f3[0] == 0.3);
  CHECK(f3[1] == -0.7);

  Rng rng(991);
  for (const char* id : {"E1", "E2", "E3", "E4"}) {
    const ChartManifold m = load_example(id);
    const PointSample s = sample_points(m, 5, 25);
    for (const auto& pt : s.points) {
      Vec v{rng.uniform(-1, 1), rng.uniform(-1, 1)};
      const Vec round = sharp(m, pt, flat(m, pt, v));
      CHECK(std::abs(round[0] - v[0]) <= 1e-12);
      CHECK(std::abs(round[1] - v[1]) <= 1e-12);
    }
  }
}

TEST_CASE("symmetry and polynomial checks pass on built-ins and fail on a broken structure") {
  for (const char* id : {"E1", "E2", "E3", "E4"}) {
    const ChartManifold m = load_example(id);
    const PointSample s = sample_points(m, 42, 200);
    CHECK(check_g_symmetric_endo(m, s, 1e-9).pass);
    CHECK(check_polynomial(m, s, 1e-9).pass);
  }

  const ChartManifold bad = load_manifest(R"json({
    "name": "nilpotent", "dim": 2, "coords": ["x", "y"], "p": 0, "q": 0,
    "domain": [[-1, 1], [-1, 1]],
    "g": [["1", "0"], ["0", "1"]],
    "J": [["0", "1"], ["0", "0"]]
  })json");
  const PointSample s = sample_points(bad, 42, 50);
  const CheckReport r = check_g_symmetric_endo(bad, s, 1e-9);
  CHECK_FALSE(r.pass);
  CHECK(r.max_abs_err == doctest::Approx(1.0));
}

TEST_CASE("trivial structures satisfy the polynomial on any example metric") {
  for (const char* id : {"E1", "E2", "E3", "E4"}) {
    const ChartManifold base = load_example(id);
    ChartManifold m = base;
    m.p = 2.0;
    m.q = 1.0;
    m.J = trivial_structure_field(2.0, 1.0, base.dim);
    const PointSample s = sample_points(m, 42, 50);
    CHECK(check_polynomial(m, s, 1e-12).pass);
    CHECK(check_g_symmetric_endo(m, s, 1e-12).pass);
  }
}

TEST_CASE("metric signature is constant per example") {
  const ChartManifold e1 = load_example("E1");
  const PointSample s1 = sample_points(e1, 42, 100);
  const Signature sig1 = metric_signature(e1, s1.points.front());
  CHECK(sig1 == Signature{1, 1});
  for (const auto& x : s1.points) CHECK(metric_signature(e1, x) == sig1);

  const ChartManifold e4 = load_example("E4");
  const PointSample s4 = sample_points(e4, 42, 100);
  const Signature sig4 = metric_signature(e4, s4.points.front());
  CHECK(sig4 == Signature{2, 0});
  for (const auto& x : s4.points) CHECK(metric_signature(e4, x) == sig4);
}

TEST_CASE("point samples are deterministic in (seed, count, domain)") {
  const ChartManifold m = load_example("E3");
  const PointSample a = sample_points(m, 42, 64);
  const PointSample b = sample_points(m, 42, 64);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i] == b.points[i]);
    CHECK(a.points[i][0] >= 1.0);
    CHECK(a.points[i][0] <= 2.0);
  }
  const PointSample c = sample_points(m, 43, 64);
  CHECK(a.points != c.points);
}

TEST_CASE("fd_partial matches symbolic derivatives on a sample field") {
  const ChartManifold m = load_example("E4");
  const Expr& g11 = m.g(1, 1);
  const Expr dg = g11.derivative(0);
  const std::vector<double> x{0.8, 0.4};
  const double fd = fd_partial([&](std::span<const double> p) { return g11.eval(p); }, x, 0, 1e-5);
  CHECK(fd == doctest::Approx(dg.eval(x)).epsilon(1e-9));
}

TEST_CASE("manifest export round-trips through the loader") {
  for (const char* id : {"E2", "E4"}) {
    const ChartManifold m = load_example(id);
    const ChartManifold back = load_manifest(to_manifest(m));
    CHECK(back.name == m.name);
    CHECK(back.dim == m.dim);
    CHECK(back.p == m.p);
    const PointSample s = sample_points(m, 11, 40);
    for (const auto& x : s.points) {
      CHECK(max_abs_diff(metric_at(m, x), metric_at(back, x)) == 0.0);
      CHECK(max_abs_diff(structure_at(m, x), structure_at(back, x)) == 0.0);
    }
  }
}

}  // TEST_SUITE
