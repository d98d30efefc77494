#include "metallic/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "metallic/connections.hpp"
#include "metallic/generalized.hpp"
#include "metallic/lifts.hpp"
#include "metallic/metallic.hpp"

namespace metallic {

namespace {

constexpr double kTight = 1e-3;  // factor for matrix-identity checks (1e-12 at default base)
constexpr double kFd = 1e3;      // factor for finite-difference comparisons (1e-6 at default base)
constexpr double kLiftNij = 10.0;

double uniform_pm1(std::uint64_t& state) {
  state = state * 6364136223846793005ull + 1442695040888963407ull;
  return static_cast<double>((state >> 33) % 200001) / 100000.0 - 1.0;
}

struct Runner {
  const ChartManifold& m;
  const RunConfig& config;
  PointSample sample;
  std::vector<TimedReport> out;

  void add(const std::string& id, const std::function<CheckReport()>& f) {
    TimedReport tr;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      tr.report = f();
    } catch (const Error& e) {
      tr.report = CheckReport::make(id, m.name, sample.count,
                                    std::numeric_limits<double>::max(), 0.0);
      tr.error = e.what();
    }
    const auto t1 = std::chrono::steady_clock::now();
    tr.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    out.push_back(std::move(tr));
  }

  double tol() const { return config.tolerance; }
};

void run_core(Runner& r) {
  const ChartManifold& m = r.m;
  const PointSample& s = r.sample;

  r.add("core.metric_symmetric", [&] {
    double err = 0.0;
    for (const auto& x : s.points) {
      const Mat g = m.g.eval(x);
      err = std::max(err, max_abs_diff(g, transpose(g)));
    }
    return CheckReport::make("core.metric_symmetric", m.name, s.count, err, r.tol());
  });

  r.add("core.metric_nondegenerate", [&] {
    double min_det = std::numeric_limits<double>::infinity();
    for (const auto& x : s.points) min_det = std::min(min_det, std::abs(determinant(m.g.eval(x))));
    const double err = std::max(0.0, 1e-10 - min_det);
    return CheckReport::make("core.metric_nondegenerate", m.name, s.count, err, 0.0);
  });

  r.add("core.metric_signature_constant", [&] {
    const Signature first = metric_signature(m, s.points.front());
    int mismatches = 0;
    for (const auto& x : s.points)
      if (!(metric_signature(m, x) == first)) ++mismatches;
    return CheckReport::make("core.metric_signature_constant", m.name, s.count,
                             static_cast<double>(mismatches), 0.0);
  });

  r.add("core.j_symmetric", [&] { return check_g_symmetric_endo(m, s, r.tol()); });
  r.add("core.j_polynomial", [&] { return check_polynomial(m, s, r.tol()); });

  r.add("core.sharp_flat_roundtrip", [&] {
    std::uint64_t state = r.config.seed ^ 0xa5a5a5a5ull;
    double err = 0.0;
    for (const auto& x : s.points) {
      Vec v(static_cast<std::size_t>(m.dim));
      for (auto& c : v) c = uniform_pm1(state);
      const Vec back = sharp(m, x, flat(m, x, v));
      for (int i = 0; i < m.dim; ++i)
        err = std::max(err, std::abs(back[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(i)]));
    }
    return CheckReport::make("core.sharp_flat_roundtrip", m.name, s.count, err, r.tol() * kTight);
  });
}

void run_connections(Runner& r) {
  const ChartManifold& m = r.m;
  const PointSample& s = r.sample;
  const int n = m.dim;
  const ChristoffelField gamma = levi_civita(m);
  const ConnectionField lc = to_connection(gamma);
  const Tensor12Field nabla = covariant_derivative_endo(m.J, lc);

  r.add("conn.christoffel_symmetric", [&] {
    double err = 0.0;
    for (const auto& x : s.points)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            err = std::max(err, std::abs(gamma.at(k, i, j).eval(x) - gamma.at(k, j, i).eval(x)));
    return CheckReport::make("conn.christoffel_symmetric", m.name, s.count, err, r.tol() * kTight);
  });

  r.add("conn.levi_civita_compat", [&] {
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
              v -= gamma.at(mm, i, j).eval(x) * g(mm, k) + gamma.at(mm, i, k).eval(x) * g(j, mm);
            err = std::max(err, std::abs(v));
          }
      }
    }
    return CheckReport::make("conn.levi_civita_compat", m.name, s.count, err, r.tol());
  });

  r.add("conn.nabla_j_fd", [&] {
    // finite-difference cross-check at a handful of interior points
    const int probes = std::min<int>(16, s.count);
    double err = 0.0;
    double scale = 0.0;
    const double h = 1e-5;
    for (int pi = 0; pi < probes; ++pi) {
      std::vector<double> x = s.points[static_cast<std::size_t>(pi)];
      bool interior = true;
      for (int c = 0; c < n; ++c) {
        const Interval& iv = m.domain[static_cast<std::size_t>(c)];
        if (x[static_cast<std::size_t>(c)] - h < iv.lo || x[static_cast<std::size_t>(c)] + h > iv.hi)
          interior = false;
      }
      if (!interior) continue;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
          for (int j = 0; j < n; ++j) {
            const Expr& jkj = m.J(k, j);
            const double fd = fd_partial(
                [&](std::span<const double> pt) { return jkj.eval(pt); }, x, i, h);
            double v = fd;
            for (int mm = 0; mm < n; ++mm)
              v += gamma.at(k, i, mm).eval(x) * m.J(mm, j).eval(x) -
                   gamma.at(mm, i, j).eval(x) * m.J(k, mm).eval(x);
            const double sym = nabla.at(k, i, j).eval(x);
            err = std::max(err, std::abs(v - sym));
            scale = std::max(scale, std::abs(sym));
          }
    }
    return CheckReport::make("conn.nabla_j_fd", m.name, probes, err,
                             r.tol() * kFd * (1.0 + scale));
  });

  r.add("conn.nijenhuis_antisym", [&] {
    const Tensor12Field nij = nijenhuis_bracket(m.J);
    double err = 0.0;
    for (const auto& x : s.points)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            err = std::max(err, std::abs(nij.at(k, i, j).eval(x) + nij.at(k, j, i).eval(x)));
    return CheckReport::make("conn.nijenhuis_antisym", m.name, s.count, err, r.tol() * kTight);
  });

  r.add("conn.nijenhuis_cross", [&] {
    const Tensor12Field a = nijenhuis_bracket(m.J);
    const Tensor12Field b = nijenhuis_via_connection(m.J, gamma);
    double err = 0.0;
    for (const auto& x : s.points)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            err = std::max(err, std::abs(a.at(k, i, j).eval(x) - b.at(k, i, j).eval(x)));
    return CheckReport::make("conn.nijenhuis_cross", m.name, s.count, err, r.tol());
  });

  const CurvatureField rc = riemann(lc);

  r.add("conn.curvature_antisym", [&] {
    double err = 0.0;
    for (const auto& x : s.points)
      for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
              err = std::max(err, std::abs(rc.at(l, i, j, k).eval(x) + rc.at(l, j, i, k).eval(x)));
    return CheckReport::make("conn.curvature_antisym", m.name, s.count, err, r.tol() * kTight);
  });

  r.add("conn.curvature_lowered_antisym", [&] {
    double err = 0.0;
    for (const auto& x : s.points) {
      const Mat g = m.g.eval(x);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              double rl = 0.0, rk = 0.0;
              for (int mm = 0; mm < n; ++mm) {
                rl += g(l, mm) * rc.at(mm, i, j, k).eval(x);
                rk += g(k, mm) * rc.at(mm, i, j, l).eval(x);
              }
              err = std::max(err, std::abs(rl + rk));
            }
    }
    return CheckReport::make("conn.curvature_lowered_antisym", m.name, s.count, err, r.tol());
  });

  r.add("conn.curvature_bianchi", [&] {
    double err = 0.0;
    for (const auto& x : s.points)
      for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
              err = std::max(err, std::abs(rc.at(l, i, j, k).eval(x) + rc.at(l, j, k, i).eval(x) +
                                           rc.at(l, k, i, j).eval(x)));
    return CheckReport::make("conn.curvature_bianchi", m.name, s.count, err, r.tol() * kTight);
  });

  r.add("conn.natural_dj", [&] { return check_natural_connection(m, s, r.tol()).first; });
  r.add("conn.natural_dg", [&] { return check_natural_connection(m, s, r.tol()).second; });
  r.add("conn.torsion_formula", [&] { return check_torsion_formula(m, s, r.tol()); });

  r.add("conn.torsion_antisym", [&] {
    const Tensor12Field t = torsion_of(natural_connection(m, gamma));
    double err = 0.0;
    for (const auto& x : s.points)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            err = std::max(err, std::abs(t.at(k, i, j).eval(x) + t.at(k, j, i).eval(x)));
    return CheckReport::make("conn.torsion_antisym", m.name, s.count, err, r.tol() * kTight);
  });

  r.add("conn.torsion_identity", [&] { return check_torsion_identity(m, s, r.tol()); });

  r.add("conn.natural_equals_lc_when_parallel", [&] {
    double max_nabla = 0.0;
    for (const auto& x : s.points)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            max_nabla = std::max(max_nabla, std::abs(nabla.at(k, i, j).eval(x)));
    double err = 0.0;
    if (max_nabla <= r.tol()) {
      const ConnectionField c = natural_connection(m, gamma);
      for (const auto& x : s.points)
        for (int k = 0; k < n; ++k)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              err = std::max(err, std::abs(c.at(k, i, j).eval(x) - gamma.at(k, i, j).eval(x)));
    }
    return CheckReport::make("conn.natural_equals_lc_when_parallel", m.name, s.count, err,
                             r.tol() * kTight);
  });

  r.add("conn.locally_metallic_implies_integrable", [&] {
    const StructureFlags f = classify(m, s, r.tol());
    const double err = (f.locally_metallic && !f.integrable) ? 1.0 : 0.0;
    return CheckReport::make("conn.locally_metallic_implies_integrable", m.name, s.count, err, 0.0);
  });
}

void run_generalized(Runner& r) {
  const ChartManifold& m = r.m;
  const PointSample& s = r.sample;
  const int n = m.dim;
  const double d = m.discriminant();

  auto poly_residual = [&](const std::function<GeneralizedEndo(std::span<const double>)>& build,
                           double p, double q) {
    double err = 0.0;
    for (const auto& x : s.points) {
      const Mat j = build(x).m;
      err = std::max(err, inf_norm(j * j - p * j - q * Mat::identity(2 * n)));
    }
    return err;
  };

  r.add("gen.hat_j_polynomial", [&] {
    return CheckReport::make("gen.hat_j_polynomial", m.name, s.count,
                             poly_residual([&](auto x) { return hat_J(m, x); }, m.p, m.q),
                             r.tol() * kTight);
  });
  r.add("gen.hat_j_prime_polynomial", [&] {
    return CheckReport::make("gen.hat_j_prime_polynomial", m.name, s.count,
                             poly_residual([&](auto x) { return hat_J_prime(m, x); }, m.p, m.q),
                             r.tol() * kTight);
  });
  r.add("gen.check_j_polynomial", [&] {
    return CheckReport::make(
        "gen.check_j_polynomial", m.name, s.count,
        poly_residual([&](auto x) { return check_J(m, x, m.p, m.q); }, m.p, m.q),
        r.tol() * kTight);
  });
  r.add("gen.check_j_prime_polynomial", [&] {
    return CheckReport::make(
        "gen.check_j_prime_polynomial", m.name, s.count,
        poly_residual([&](auto x) { return check_J_prime(m, x, m.p, m.q); }, m.p, m.q),
        r.tol() * kTight);
  });

  r.add("gen.hat_vs_check", [&] {
    double err = 0.0;
    for (const auto& x : s.points)
      err = std::max(err, max_abs_diff(hat_J(m, x).m, check_J(m, x, m.p, m.q).m));
    return CheckReport::make("gen.hat_vs_check", m.name, s.count, err, r.tol() * kTight);
  });

  r.add("gen.product_complex_squares", [&] {
    double err = std::max(
        poly_residual([&](auto x) { return check_J(m, x, 0.0, 1.0); }, 0.0, 1.0),
        poly_residual([&](auto x) { return check_J(m, x, 0.0, -1.0); }, 0.0, -1.0));
    return CheckReport::make("gen.product_complex_squares", m.name, s.count, err, r.tol() * kTight);
  });

  auto random_pairs_symmetry =
      [&](const std::string& id,
          const std::function<GeneralizedEndo(std::span<const double>)>& endo,
          const std::function<GeneralizedMetric(std::span<const double>)>& metric) {
        std::uint64_t state = r.config.seed ^ 0x600dull;
        double err = 0.0;
        const int pairs = 100;
        for (const auto& x : s.points) {
          const GeneralizedEndo e = endo(x);
          const GeneralizedMetric gm = metric(x);
          for (int rep = 0; rep < pairs; ++rep) {
            GeneralizedVector a, b;
            a.vec.resize(static_cast<std::size_t>(n));
            a.form.resize(static_cast<std::size_t>(n));
            b.vec.resize(static_cast<std::size_t>(n));
            b.form.resize(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
              a.vec[static_cast<std::size_t>(i)] = uniform_pm1(state);
              a.form[static_cast<std::size_t>(i)] = uniform_pm1(state);
              b.vec[static_cast<std::size_t>(i)] = uniform_pm1(state);
              b.form[static_cast<std::size_t>(i)] = uniform_pm1(state);
            }
            err = std::max(err, std::abs(pair_with(gm, apply(e, a), b) -
                                         pair_with(gm, a, apply(e, b))));
          }
        }
        return CheckReport::make(id, m.name, s.count, err, r.tol() * kTight);
      };

  if (d != 0.0) {
    r.add("gen.hat_g_symmetry", [&] {
      return random_pairs_symmetry(
          "gen.hat_g_symmetry", [&](auto x) { return hat_J(m, x); },
          [&](auto x) { return hat_g(m, x); });
    });
  }
  r.add("gen.check_g_symmetry", [&] {
    return random_pairs_symmetry(
        "gen.check_g_symmetry", [&](auto x) { return check_J(m, x, m.p, m.q); },
        [&](auto x) { return check_g(m, x, m.p, m.q); });
  });

  r.add("gen.symplectic_identity",
        [&] { return check_symplectic_identity(m, s, m.p, m.q, r.tol() * kTight); });

  r.add("gen.jstar_consistency", [&] {
    double err = 0.0;
    for (const auto& x : s.points) {
      const Mat g = metric_at(m, x);
      const Mat ginv = inverse_metric_at(m, x);
      const Mat j = structure_at(m, x);
      err = std::max(err, max_abs_diff(transpose(j), g * j * ginv));
    }
    return CheckReport::make("gen.jstar_consistency", m.name, s.count, err, r.tol() * kTight);
  });

  if (d < 0.0) {
    r.add("gen.norden_reconstruction", [&] {
      const ExprMat jplus = norden_from_metallic(m, +1, s, r.tol());
      const double a = std::sqrt(-d) / 2.0;
      const double b = m.p / 2.0;
      double err = 0.0;
      for (const auto& x : s.points) {
        err = std::max(err, max_abs_diff(generalized_norden_family(m, jplus, a, b, x, r.tol()).m,
                                         hat_J(m, x).m));
        err = std::max(err, max_abs_diff(generalized_norden_family(m, jplus, -a, b, x, r.tol()).m,
                                         hat_J_prime(m, x).m));
      }
      return CheckReport::make("gen.norden_reconstruction", m.name, s.count, err, r.tol() * kTight);
    });

    r.add("gen.norden_from_check", [&] {
      double err = 0.0;
      for (const auto& x : s.points) {
        const GeneralizedMetric gm = check_g(m, x, m.p, m.q);
        for (int sign : {+1, -1}) {
          const GeneralizedEndo jn = generalized_norden_from_check(m, x, m.p, m.q, sign);
          err = std::max(err, inf_norm(jn.m * jn.m + Mat::identity(2 * n)));
          err = std::max(err, max_abs_diff(transpose(jn.m) * gm.m, gm.m * jn.m));
        }
      }
      return CheckReport::make("gen.norden_from_check", m.name, s.count, err, r.tol() * kTight);
    });
  }

  if (d != 0.0) {
    std::vector<CheckReport> dhat;
    std::string failure;
    try {
      dhat = check_d_hat(m, s, r.tol());
    } catch (const Error& e) {
      failure = e.what();
    }
    if (failure.empty()) {
      for (const auto& rep : dhat) r.add(rep.check_id, [&rep] { return rep; });
    } else {
      for (const char* id :
           {"gen.dhat_dj", "gen.dhat_dg", "gen.dhat_torsion", "gen.dhat_curvature"}) {
        TimedReport tr;
        tr.report = CheckReport::make(id, m.name, s.count,
                                      std::numeric_limits<double>::max(), 0.0);
        tr.error = failure;
        r.out.push_back(std::move(tr));
      }
    }
  }
}

void run_lifts(Runner& r) {
  const ChartManifold& m = r.m;
  const double tol = r.tol();

  for (const LiftKind kind : {LiftKind::tangent, LiftKind::cotangent}) {
    if (kind == LiftKind::tangent && m.discriminant() == 0.0) continue;
    const std::string prefix = kind == LiftKind::tangent ? "lift.tan." : "lift.cot.";
    LiftedChart lift;
    try {
      lift = kind == LiftKind::tangent ? build_tangent_lift(m) : build_cotangent_lift(m);
    } catch (const Error& e) {
      TimedReport tr;
      tr.report = CheckReport::make(prefix + "build", m.name, r.sample.count,
                                    std::numeric_limits<double>::max(), 0.0);
      tr.error = e.what();
      r.out.push_back(std::move(tr));
      continue;
    }
    const PointSample chart_sample = sample_points(lift.chart, r.config.seed, r.config.samples);

    r.add(prefix + "polynomial", [&] {
      return check_polynomial(lift.chart, chart_sample, tol);
    });
    r.add(prefix + "symmetric", [&] {
      return check_g_symmetric_endo(lift.chart, chart_sample, tol);
    });
    r.add(prefix + "frame_conjugation",
          [&] { return check_frame_vs_conjugation(lift, r.sample, tol * kTight); });
    {
      const LiftNijenhuisReports nij = check_nijenhuis_tables(lift, chart_sample, tol * kLiftNij);
      r.add(nij.vertical_vertical.check_id, [&] { return nij.vertical_vertical; });
      r.add(nij.mixed.check_id, [&] { return nij.mixed; });
      r.add(nij.horizontal_horizontal.check_id, [&] { return nij.horizontal_horizontal; });
    }
    {
      const LiftMetricComparison cmp = compare_lift_metric_with_pullback(lift, r.sample, tol * kTight);
      r.add(cmp.table_vs_pullback.check_id, [&] { return cmp.table_vs_pullback; });
      if (kind == LiftKind::cotangent)
        r.add(cmp.fiber_block_ratio.check_id, [&] { return cmp.fiber_block_ratio; });
    }
  }

  r.add("lift.intertwine", [&] { return intertwine_check(m, r.sample, tol * kTight); });
}

}  // namespace

bool valid_suite_name(const std::string& name) {
  return name == "core" || name == "connections" || name == "generalized" || name == "lifts" ||
         name == "all";
}

std::vector<TimedReport> run_suites(const ChartManifold& m, const RunConfig& config) {
  Runner r{m, config, sample_points(m, config.seed, config.samples), {}};

  auto selected = [&](const char* name) {
    for (const auto& s : config.suites)
      if (s == "all" || s == name) return true;
    return false;
  };

  if (selected("core")) run_core(r);
  if (selected("connections")) run_connections(r);
  if (selected("generalized")) run_generalized(r);
  if (selected("lifts")) run_lifts(r);

  std::sort(r.out.begin(), r.out.end(), [](const TimedReport& a, const TimedReport& b) {
    return a.report.check_id < b.report.check_id;
  });
  return r.out;
}

}  // namespace metallic
