#pragma once

// Shared fixtures and generators for the unit and acceptance suites.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metallic/examples.hpp"
#include "metallic/expr.hpp"
#include "metallic/manifold.hpp"

namespace testing_support {

// Norden fixture: the flat neutral metric with a coordinate-dependent
// almost complex structure; J^2 = -I and J is g-symmetric, so it is a
// valid chart manifold with p=0, q=-1.
inline const char* kNordenManifest = R"json({
  "name": "N1",
  "dim": 2,
  "coords": ["u", "v"],
  "p": 0, "q": -1,
  "domain": [[-1, 1], [-1, 1]],
  "g": [["1", "0"], ["0", "-1"]],
  "J": [["u", "sqrt(1 + u^2)"], ["-sqrt(1 + u^2)", "-u"]]
})json";

// E1's metric with the constant rotation structure; Norden with p=0, q=-1.
inline const char* kConstantNordenManifest = R"json({
  "name": "E1N",
  "dim": 2,
  "coords": ["x", "y"],
  "p": 0, "q": -1,
  "domain": [[-1, 1], [-1, 1]],
  "g": [["1", "0"], ["0", "-1"]],
  "J": [["0", "1"], ["-1", "0"]]
})json";

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  int below(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

 private:
  std::uint64_t state_;
};

// Bounded random expression generator for derivative-oracle tests: trees of
// limited depth whose values, first derivatives, and third derivatives stay
// small at the probe point, so the central-difference truncation error is
// controlled.
class ExprGen {
 public:
  ExprGen(std::uint64_t seed, int dims) : rng_(seed), dims_(dims) {}

  metallic::Expr generate(int depth) {
    using metallic::Expr;
    if (depth <= 0) return leaf();
    const int pick = rng_.below(10);
    if (pick < 5) {  // binary
      const Expr a = generate(depth - 1);
      const Expr b = generate(depth - 1);
      switch (rng_.below(5)) {
        case 0: return a + b;
        case 1: return a - b;
        case 2: return a * b;
        case 3: return a / b;
        default: return metallic::pow(a, Expr::constant(static_cast<double>(1 + rng_.below(3))));
      }
    }
    if (pick < 8) {  // unary
      const Expr a = generate(depth - 1);
      switch (rng_.below(6)) {
        case 0: return -a;
        case 1: return metallic::sin(a);
        case 2: return metallic::cos(a);
        case 3: return metallic::exp(a);
        case 4: return metallic::ln(a);
        default: return metallic::sqrt(a);
      }
    }
    return leaf();
  }

  std::vector<double> point() {
    std::vector<double> x(static_cast<std::size_t>(dims_));
    for (auto& c : x) c = rng_.uniform(0.5, 1.5);
    return x;
  }

  struct Case {
    metallic::Expr expr;
    std::vector<double> x;
    int coord;
  };

  // Draws until the case passes the boundedness filter.
  std::optional<Case> draw_bounded(double h) {
    for (int attempt = 0; attempt < 200; ++attempt) {
      Case c{generate(3), point(), rng_.below(dims_)};
      try {
        bool ok = true;
        for (double offset : {-h, 0.0, h}) {
          std::vector<double> probe = c.x;
          probe[static_cast<std::size_t>(c.coord)] += offset;
          const double v = c.expr.eval(probe);
          if (!std::isfinite(v) || std::abs(v) > 30.0) ok = false;
        }
        if (!ok) continue;
        const metallic::Expr d1 = c.expr.derivative(c.coord);
        const double v1 = d1.eval(c.x);
        if (!std::isfinite(v1) || std::abs(v1) > 30.0) continue;
        const double v3 = d1.derivative(c.coord).derivative(c.coord).eval(c.x);
        if (!std::isfinite(v3) || std::abs(v3) > 1e4) continue;
        return c;
      } catch (const metallic::DomainError&) {
        continue;
      }
    }
    return std::nullopt;
  }

 private:
  metallic::Expr leaf() {
    using metallic::Expr;
    if (rng_.below(10) < 6) return Expr::coordinate(rng_.below(dims_));
    return Expr::constant(rng_.uniform(0.3, 2.2));
  }

  Rng rng_;
  int dims_;
};

}  // namespace testing_support
