#include "proxnag/certificates.hpp"

#include "proxnag/io.hpp"
#include "proxnag/problems.hpp"
#include "proxnag/solvers.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <unistd.h>

using namespace proxnag;

TEST_CASE("lyapunov constants") {
  SUBCASE("worked midpoint example") {
    LyapunovParams params = compute_params(0.5, 1.0, 1.0, 0.1, 0.1);
    CHECK(params.b == doctest::Approx(1.0));
    CHECK(params.beta == doctest::Approx(0.45));
    CHECK(params.c_lower == doctest::Approx(0.45));
    CHECK(params.c_upper == doctest::Approx(0.65));
    CHECK(params.c == doctest::Approx(0.55));
    // theta = max{1.0/1.05, 0.5/0.55}
    CHECK(params.theta == doctest::Approx(1.0 / 1.05).epsilon(1e-12));
    CHECK(params.theory_regime);
  }
  SUBCASE("degenerate interval when both curvatures vanish") {
    CHECK_THROWS_AS(compute_params(0.5, 1.0, 1.0, 0.0, 0.0),
                    DegenerateIntervalError);
  }
  SUBCASE("theta hits one exactly at both endpoints") {
    LyapunovParams base = compute_params(0.5, 1.0, 1.0, 0.1, 0.1);
    LyapunovParams low = compute_params(0.5, 1.0, 1.0, 0.1, 0.1, base.c_lower);
    LyapunovParams high = compute_params(0.5, 1.0, 1.0, 0.1, 0.1, base.c_upper);
    CHECK(low.theta == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(high.theta == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("interval width identity and theta < 1 for random admissible tuples") {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    std::uniform_real_distribution<double> pos(0.1, 10.0);
    for (int trial = 0; trial < 1000; ++trial) {
      const double a = unit(rng);
      const double L = pos(rng);
      const double mu_hat = L * (1.0 + unit(rng));  // mu_hat >= L
      const double mu_f = unit(rng) * L;
      const double mu_F = mu_f;  // convex r adds nothing
      LyapunovParams params = compute_params(a, mu_hat, L, mu_f, mu_F);
      CHECK(params.c_upper - params.c_lower ==
            doctest::Approx((mu_F + mu_f) / (2.0 * a)).epsilon(1e-12));
      CHECK(params.theta < 1.0);
      // every interior c keeps theta below one
      const double c =
          params.c_lower + unit(rng) * (params.c_upper - params.c_lower);
      if (c > 0.0 && c > params.c_lower && c < params.c_upper)
        CHECK(compute_params(a, mu_hat, L, mu_f, mu_F, c).theta < 1.0);
    }
  }
  SUBCASE("warn-and-proceed below the theory regime") {
    LyapunovParams params = compute_params(0.5, 0.5, 1.0, 0.1, 0.1);
    CHECK_FALSE(params.theory_regime);
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(compute_params(0.0, 1.0, 1.0, 0.1, 0.1), InputError);
    CHECK_THROWS_AS(compute_params(0.5, -1.0, 1.0, 0.1, 0.1), InputError);
    CHECK_THROWS_AS(compute_params(0.5, 1.0, 1.0, 0.1, 0.1, -0.1), InputError);
  }
}

TEST_CASE("lyapunov and energy values") {
  LyapunovParams params = compute_params(0.5, 1.0, 1.0, 0.1, 0.1, 0.55);
  CHECK(lyapunov_value(params, 0.0, 0.0, 0.0) == 0.0);
  CHECK(lyapunov_value(params, 1.0, 1.0, 1.0) == doctest::Approx(2.55));

  CHECK(convex_energy(1.0, 0.5, 0.0, 0.0, 0.0) == 0.0);
  CHECK(convex_energy(1.0, 0.5, 0.0, 1.0, 0.0) == doctest::Approx(1.0));
  CHECK(convex_energy(1.0, 0.5, 0.0, 0.0, 1.0) == doctest::Approx(0.5));
  // the X coefficient carries the (1-a) factor
  CHECK(convex_energy(1.0, 0.9, 0.0, 0.0, 1.0) ==
        doctest::Approx(0.1 / 1.8).epsilon(1e-14));
}

namespace {

TraceRow synthetic_row(long k, double gap_v, double V = 0.0, double X = 0.0,
                       double D = 0.0, double R = 0.0, double M = 0.0) {
  TraceRow row;
  row.k = k;
  row.F_v = gap_v;
  row.gap_v = gap_v;
  row.V = V;
  row.X = X;
  row.D = D;
  row.R = R;
  row.M = M;
  return row;
}

LyapunovParams bare_params(double theta) {
  LyapunovParams params;
  params.a = 0.5;
  params.mu_hat = 1.0;
  params.b = 0.0;  // lyapunov value collapses to the gap
  params.c = 1.0;
  params.theta = theta;
  return params;
}

}  // namespace

TEST_CASE("contraction checker on synthetic sequences") {
  SUBCASE("geometric decay passes") {
    Trace trace{synthetic_row(0, 1.0), synthetic_row(1, 0.9),
                synthetic_row(2, 0.81)};
    CHECK(check_contraction(trace, bare_params(0.95)).empty());
  }
  SUBCASE("a slow step is flagged with its slack") {
    Trace trace{synthetic_row(0, 1.0), synthetic_row(1, 0.96)};
    auto violations = check_contraction(trace, bare_params(0.95));
    REQUIRE_FALSE(violations.empty());
    CHECK(violations.front().k == 0);
    CHECK(violations.front().kind == "contraction");
    CHECK(violations.front().slack == doctest::Approx(0.01));
  }
  SUBCASE("short traces are rejected") {
    Trace trace{synthetic_row(0, 1.0)};
    CHECK_THROWS_AS(check_contraction(trace, bare_params(0.9)), InputError);
  }
  SUBCASE("missing columns are rejected") {
    Trace trace{synthetic_row(0, 1.0), synthetic_row(1, 0.5)};
    trace[1].V.reset();
    CHECK_THROWS_AS(check_contraction(trace, bare_params(0.9)), InputError);
  }
}

TEST_CASE("mismatch absorption checker") {
  SUBCASE("all-zero geometry is safe") {
    Trace trace{synthetic_row(0, 0.0), synthetic_row(1, 0.0)};
    CHECK(check_mismatch_absorption(trace, 1.0, 1.0, 0.5).empty());
  }
  SUBCASE("young equality case cancels exactly when mu_hat = L") {
    const double a = 0.5, D = 0.7, R = 0.3;
    const double M = std::pow(1.0 - a, 3) * D + R / a;
    Trace trace{synthetic_row(0, 0.0, 0.0, 0.0, D),
                synthetic_row(1, 0.0, 0.0, 0.0, 0.0, R, M)};
    CHECK(check_mismatch_absorption(trace, 2.0, 2.0, a).empty());
    // the expression is exactly zero here, so any mu_hat < L flags it
    CHECK_FALSE(check_mismatch_absorption(trace, 2.0, 2.2, a).empty());
  }
  SUBCASE("violating geometry is flagged") {
    Trace trace{synthetic_row(0, 0.0, 0.0, 0.0, 0.0),
                synthetic_row(1, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0)};
    auto violations = check_mismatch_absorption(trace, 1.0, 1.0, 0.5);
    REQUIRE(violations.size() == 1);
    CHECK(violations.front().slack == doctest::Approx(0.5));
  }
}

TEST_CASE("certificates hold on a strongly convex desk run") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    ElasticNetInstance inst =
        gen_elastic_net(40, 20, "hard", 100.0, -1.0, 0.2, seed);
    CompositeProblem p = with_reference(inst.make_problem(),
                                        compute_reference(inst.make_problem()));
    ProxNAGGSConfig cfg;
    cfg.mu_hat = p.f->smoothness();
    cfg.gamma0 = cfg.mu_hat;
    cfg.alpha = 1.0;
    cfg.max_iter = 600;
    ProxNAGGSRun run = prox_naggs_run(p, cfg, Vector::Zero(20));

    LyapunovParams params =
        compute_params(cfg.a(), cfg.mu_hat, p.f->smoothness(),
                       p.f->strong_convexity(), p.mu_F);
    CHECK(check_contraction(run.trace, params).empty());
    CHECK(check_mismatch_absorption(run.trace, cfg.mu_hat, p.f->smoothness(),
                                    cfg.a())
              .empty());
  }
}

TEST_CASE("convex descent certificate on an underdetermined lasso") {
  ElasticNetInstance inst = gen_elastic_net(10, 25, "easy", 0.0, -1.0, 0.0, 5);
  CompositeProblem p = with_reference(inst.make_problem(),
                                      compute_reference(inst.make_problem()));
  CHECK(p.f->strong_convexity() == 0.0);

  ProxNAGGSConfig cfg;
  cfg.mu_hat = p.f->smoothness();
  cfg.gamma0 = cfg.mu_hat;
  cfg.alpha = 1.0;
  cfg.max_iter = 500;
  cfg.record_iterates = true;
  ProxNAGGSRun run = prox_naggs_run(p, cfg, Vector::Zero(25));

  ConvexDescentReport report =
      check_convex_descent(run.trace, cfg.mu_hat, cfg.a(), 1e-10, &p,
                           &run.v_history, {10, 100});
  CHECK(report.violations.empty());
  CHECK(report.sum_gap_ok);
  CHECK(report.best_rate_ok);
  CHECK(report.ergodic_rate_ok);
  REQUIRE(report.ergodic_values.size() == 2);
  CHECK(report.ergodic_values[0].first == 10);

  SUBCASE("annotation is reproducible bit for bit") {
    Trace annotated = run.trace;
    annotate_convex_energy(annotated, cfg.mu_hat, cfg.a());
    Trace again = annotated;
    annotate_convex_energy(again, cfg.mu_hat, cfg.a());
    for (size_t i = 0; i < annotated.size(); ++i)
      CHECK(*annotated[i].energy == *again[i].energy);
  }
}

TEST_CASE("checks are pure functions of the stored trace") {
  ElasticNetInstance inst = gen_elastic_net(30, 15, "hard", 50.0, -1.0, 0.2, 13);
  CompositeProblem p = with_reference(inst.make_problem(),
                                      compute_reference(inst.make_problem()));
  ProxNAGGSConfig cfg;
  cfg.mu_hat = p.f->smoothness();
  cfg.gamma0 = cfg.mu_hat;
  cfg.max_iter = 200;
  ProxNAGGSRun run = prox_naggs_run(p, cfg, Vector::Zero(15));

  LyapunovParams params = compute_params(
      cfg.a(), cfg.mu_hat, p.f->smoothness(), p.f->strong_convexity(), p.mu_F);
  Trace annotated = run.trace;
  annotate_lyapunov(annotated, params);

  const std::string path = std::filesystem::temp_directory_path() /
                           ("proxnag_cert_" + std::to_string(::getpid()) + ".csv");
  write_trace_csv(annotated, path);
  Trace restored = read_trace_csv(path);
  std::remove(path.c_str());

  REQUIRE(restored.size() == annotated.size());
  // 17-digit round trip is lossless, so re-annotation reproduces every bit
  Trace reannotated = restored;
  annotate_lyapunov(reannotated, params);
  for (size_t i = 0; i < restored.size(); ++i)
    CHECK(*reannotated[i].lyap == *annotated[i].lyap);

  // and both check passes agree row for row
  auto before = check_contraction(annotated, params);
  auto after = check_contraction(restored, params);
  CHECK(before.size() == after.size());
  CHECK(check_mismatch_absorption(annotated, cfg.mu_hat, p.f->smoothness(),
                                  cfg.a())
            .size() ==
        check_mismatch_absorption(restored, cfg.mu_hat, p.f->smoothness(),
                                  cfg.a())
            .size());
}

TEST_CASE("trivial run from the solution passes the descent check") {
  ElasticNetInstance inst = gen_elastic_net(12, 6, "easy", 0.0, -1.0, 0.3, 8);
  CompositeProblem p = with_reference(inst.make_problem(),
                                      compute_reference(inst.make_problem()));
  ProxNAGGSConfig cfg;
  cfg.mu_hat = p.f->smoothness();
  cfg.gamma0 = cfg.mu_hat;
  cfg.max_iter = 5;
  ProxNAGGSRun run = prox_naggs_run(p, cfg, p.reference->x_star);
  ConvexDescentReport report =
      check_convex_descent(run.trace, cfg.mu_hat, cfg.a());
  CHECK(report.violations.empty());
  CHECK(report.energy0 <= 1e-12);
}
