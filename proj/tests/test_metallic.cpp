#include <doctest.h>

#include <cmath>
#include <numbers>

#include "metallic/examples.hpp"
#include "metallic/metallic.hpp"
#include "support.hpp"

using namespace metallic;
using testing_support::Rng;

TEST_SUITE("metallic") {

TEST_CASE("named means match their closed forms") {
  for (const NamedMean& mean : named_means()) {
    CHECK(std::abs(metallic_number(mean.p, mean.q) - mean.value) <= 1e-12);
  }
  CHECK(std::abs(metallic_number(1, 1) - std::numbers::phi) <= 1e-15);
  CHECK(std::abs(metallic_number(2, 1) - (1.0 + std::sqrt(2.0))) <= 1e-15);
  CHECK(std::abs(metallic_number(1, 2) - 2.0) <= 1e-15);
  CHECK(std::abs(metallic_number(1, 3) - 2.302775637731995) <= 1e-15);
  // the (4,1) mean is the cube of the (1,1) mean
  const double golden = metallic_number(1, 1);
  CHECK(std::abs(metallic_number(4, 1) - golden * golden * golden) <= 1e-12);
}

TEST_CASE("metallic_number satisfies its quadratic") {
  Rng rng(314159);
  for (int i = 0; i < 1000; ++i) {
    const double p = rng.uniform(-5.0, 5.0);
    double q = rng.uniform(-5.0, 5.0);
    if (p * p + 4.0 * q < 0.0) q = (1.0 + p * p) / 4.0;  // keep d >= 0
    const double x = metallic_number(p, q);
    const double scale = 1.0 + x * x + std::abs(p * x) + std::abs(q);
    CHECK(std::abs(x * x - p * x - q) <= 1e-12 * scale);
  }
  CHECK_THROWS_AS(metallic_number(0.0, -1.0), NegativeDiscriminant);
}

TEST_CASE("parameter classification") {
  CHECK(MetallicParams{1, 1}.kind() == MetallicParams::Kind::hyperbolic);
  CHECK(MetallicParams{2, -1}.kind() == MetallicParams::Kind::parabolic);
  CHECK(MetallicParams{2, -2}.kind() == MetallicParams::Kind::elliptic_norden);
  CHECK(NordenFamilyParams{0.0, 3.0}.induced().discriminant() == 0.0);
  CHECK(NordenFamilyParams{2.0, 0.0}.induced().discriminant() == -16.0);
}

TEST_CASE("trivial structures") {
  const Mat golden = trivial_structure(1, 1, 2);
  CHECK(golden(0, 0) == doctest::Approx(std::numbers::phi).epsilon(1e-15));
  CHECK(golden(0, 1) == 0.0);

  const Mat minus = trivial_structure(0, 1, 3, -1);
  for (int i = 0; i < 3; ++i) CHECK(minus(i, i) == -1.0);

  const double mu = trivial_structure(3, 1, 1)(0, 0);
  CHECK(std::abs(mu * mu - 3.0 * mu - 1.0) <= 1e-12);
  CHECK_THROWS_AS(trivial_structure(0, -1, 2), NegativeDiscriminant);
}

TEST_CASE("metallic structures from a Norden structure") {
  const ChartManifold e1n = load_manifest(testing_support::kConstantNordenManifest);
  const PointSample s = sample_points(e1n, 42, 100);

  const MetallicFromNorden j11 = metallic_from_norden(e1n, e1n.J, 1.0, 1.0, s);
  CHECK(j11.params.p == 2.0);
  CHECK(j11.params.q == -2.0);
  const std::vector<double> x{0.2, -0.3};
  const Mat jm = j11.J.eval(x);
  CHECK(jm(0, 0) == 1.0);
  CHECK(jm(0, 1) == 1.0);
  CHECK(jm(1, 0) == -1.0);
  CHECK(jm(1, 1) == 1.0);

  const MetallicFromNorden j10 = metallic_from_norden(e1n, e1n.J, 1.0, 0.0, s);
  CHECK(j10.params.p == 0.0);
  CHECK(j10.params.q == -1.0);
  CHECK(max_abs_diff(j10.J.eval(x), e1n.J.eval(x)) == 0.0);

  const MetallicFromNorden j05 = metallic_from_norden(e1n, e1n.J, 0.0, 5.0, s);
  CHECK(j05.params.p == 10.0);
  CHECK(j05.params.q == -25.0);
  CHECK(j05.params.discriminant() == 0.0);
  CHECK(j05.J.eval(x)(0, 0) == 5.0);

  // a non-Norden input is rejected
  const ChartManifold e2 = load_example("E2");
  const PointSample s2 = sample_points(e2, 42, 50);
  CHECK_THROWS_AS(metallic_from_norden(e2, e2.J, 1.0, 1.0, s2), NotNorden);
}

TEST_CASE("Norden structures from a metallic Norden manifold") {
  const ChartManifold e1 = load_example("E1");
  const PointSample s = sample_points(e1, 42, 100);

  const ExprMat jp = norden_from_metallic(e1, +1, s);
  const std::vector<double> x{0.4, 0.1};
  const Mat j = jp.eval(x);
  CHECK(j(0, 0) == doctest::Approx(0.0));
  CHECK(j(0, 1) == doctest::Approx(1.0));
  CHECK(j(1, 0) == doctest::Approx(-1.0));
  CHECK(j(1, 1) == doctest::Approx(0.0));
  CHECK(inf_norm(j * j + Mat::identity(2)) <= 1e-15);

  const ExprMat jm = norden_from_metallic(e1, -1, s);
  CHECK(max_abs_diff(jm.eval(x), -1.0 * jp.eval(x)) == 0.0);

  // wrong discriminant is rejected
  const ChartManifold e2 = load_example("E2");
  const PointSample s2 = sample_points(e2, 42, 50);
  CHECK_THROWS_AS(norden_from_metallic(e2, +1, s2), WrongDiscriminant);
}

TEST_CASE("Norden <-> metallic round trip recovers the structure") {
  for (const char* manifest :
       {testing_support::kNordenManifest, testing_support::kConstantNordenManifest}) {
    ChartManifold m = load_manifest(manifest);
    // reinterpret with metallic Norden parameters (p=2b, q=-(a^2+b^2))
    const PointSample s = sample_points(m, 42, 100);
    const double d = m.discriminant();
    REQUIRE(d < 0.0);
    const ExprMat jp = norden_from_metallic(m, +1, s);
    const MetallicFromNorden rebuilt =
        metallic_from_norden(m, jp, std::sqrt(-d) / 2.0, m.p / 2.0, s);
    CHECK(rebuilt.params.p == doctest::Approx(m.p).epsilon(1e-15));
    CHECK(rebuilt.params.q == doctest::Approx(m.q).epsilon(1e-15));
    double err = 0.0;
    for (const auto& x : s.points)
      err = std::max(err, max_abs_diff(rebuilt.J.eval(x), m.J.eval(x)));
    CHECK(err <= 1e-12);
  }
}

TEST_CASE("all metallic Norden examples keep their derived structure properties") {
  const ChartManifold e1 = load_example("E1");
  const PointSample s = sample_points(e1, 42, 200);
  for (int sign : {+1, -1}) {
    const ExprMat jn = norden_from_metallic(e1, sign, s);
    double err = 0.0;
    for (const auto& x : s.points) {
      const Mat j = jn.eval(x);
      const Mat g = metric_at(e1, x);
      err = std::max(err, inf_norm(j * j + Mat::identity(2)));
      err = std::max(err, max_abs_diff(transpose(j) * g, g * j));
    }
    CHECK(err <= 1e-9);
  }
}

}  // TEST_SUITE
