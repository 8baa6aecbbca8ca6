#include "proxnag/solvers.hpp"

#include <chrono>
#include <cmath>

namespace proxnag {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_between(Clock::time_point t0, Clock::time_point t1) {
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

TraceRow make_trace_row(const CompositeProblem& p, long k, const Vector& x,
                        const Vector& v, double elapsed_s) {
  TraceRow row;
  row.k = k;
  row.F_x = composite_value(p, x).as_double();
  row.F_v = (&x == &v) ? row.F_x : composite_value(p, v).as_double();
  if (p.has_reference()) {
    row.gap_x = row.F_x - p.reference->F_star;
    row.gap_v = row.F_v - p.reference->F_star;
    row.V = (v - p.reference->x_star).squaredNorm();
    row.X = (x - p.reference->x_star).squaredNorm();
  }
  row.elapsed_s = elapsed_s;
  return row;
}

std::optional<long> first_gap_crossing(const Trace& trace, double tol,
                                       bool at_v) {
  for (const TraceRow& row : trace) {
    const std::optional<double>& gap = at_v ? row.gap_v : row.gap_x;
    if (gap && *gap <= tol) return row.k;
  }
  return std::nullopt;
}

void ProxNAGGSConfig::validate() const {
  if (mu_hat <= 0.0) throw ConfigError("prox-naggs: mu_hat must be positive");
  if (gamma0 <= 0.0) throw ConfigError("prox-naggs: gamma0 must be positive");
  if (alpha <= 0.0) throw ConfigError("prox-naggs: alpha must be positive");
  if (max_iter < 0) throw ConfigError("prox-naggs: max_iter must be nonnegative");
  if (gap_tol < 0.0) throw ConfigError("prox-naggs: gap_tol must be nonnegative");
  if (residual_tol < 0.0)
    throw ConfigError("prox-naggs: residual_tol must be nonnegative");
}

ProxNAGGSState prox_naggs_init(const ProxNAGGSConfig& cfg, const Vector& x0) {
  return ProxNAGGSState{x0, x0, cfg.gamma0, 0};
}

Vector prox_naggs_gradient_point(const ProxNAGGSConfig& cfg,
                                 const ProxNAGGSState& st) {
  const double a = cfg.a();
  return (1.0 - a) * st.x + a * st.v;
}

ProxNAGGSStepResult prox_naggs_step(const CompositeProblem& p,
                                    const ProxNAGGSConfig& cfg,
                                    const ProxNAGGSState& st, const Vector& g) {
  require_dimension(g, p.dimension, "prox_naggs_step");
  if (!g.allFinite())
    throw NumericalError("prox_naggs_step: nonfinite gradient", st.k);

  const double a = cfg.a();
  Vector x_next = (1.0 - a) * st.x + a * st.v;
  const double b =
      cfg.alpha * cfg.mu_hat / (cfg.alpha * cfg.mu_hat + st.gamma);
  Vector z = (1.0 - b) * st.v + b * x_next;
  const double scale = b / cfg.mu_hat;
  Vector v_next = p.r->prox(scale, z - scale * g);

  ProxStepDiagnostics diag;
  diag.D = (st.x - st.v).squaredNorm();
  diag.R = (v_next - z).squaredNorm();
  diag.M = (v_next - x_next).squaredNorm();
  diag.q = (cfg.mu_hat / b) * (z - v_next);
  diag.s = diag.q - g;
  diag.z = std::move(z);

  ProxNAGGSState next;
  next.x = std::move(x_next);
  next.v = std::move(v_next);
  next.gamma = (1.0 - a) * st.gamma + a * cfg.mu_hat;
  next.k = st.k + 1;
  return {std::move(next), std::move(diag)};
}

ProxNAGGSRun prox_naggs_run(const CompositeProblem& p,
                            const ProxNAGGSConfig& cfg, const Vector& x0,
                            const GradientSource& grad_source) {
  cfg.validate();
  require_dimension(x0, p.dimension, "prox_naggs_run");
  if (cfg.gap_tol > 0.0 && !p.has_reference())
    throw ConfigError("prox-naggs: gap_tol stopping needs a reference solution");

  ProxNAGGSRun run;
  run.state = prox_naggs_init(cfg, x0);
  if (cfg.record_iterates) run.v_history.push_back(run.state.v);
  if (cfg.max_iter == 0) return run;

  if (cfg.record_trace) {
    TraceRow row0 = make_trace_row(p, 0, run.state.x, run.state.v, 0.0);
    row0.D = 0.0;
    row0.M = 0.0;
    run.trace.push_back(std::move(row0));
  }

  double elapsed = 0.0;
  for (long k = 0; k < cfg.max_iter; ++k) {
    const auto t0 = Clock::now();
    Vector x_next = prox_naggs_gradient_point(cfg, run.state);
    Vector g = grad_source ? grad_source(x_next, k) : p.f->gradient(x_next);
    ProxNAGGSStepResult step = prox_naggs_step(p, cfg, run.state, g);
    elapsed += seconds_between(t0, Clock::now());

    run.state = std::move(step.state);
    if (cfg.record_iterates) run.v_history.push_back(run.state.v);

    std::optional<double> gap_v;
    if (cfg.record_trace || cfg.gap_tol > 0.0) {
      TraceRow row =
          make_trace_row(p, run.state.k, run.state.x, run.state.v, elapsed);
      row.D = step.diag.M;  // ||x_k - v_k||^2 at the new index
      row.M = step.diag.M;
      row.R = step.diag.R;
      gap_v = row.gap_v;
      if (cfg.record_trace) run.trace.push_back(std::move(row));
    }
    if (cfg.gap_tol > 0.0) {
      if (!gap_v) {
        const double F_v = composite_value(p, run.state.v).as_double();
        gap_v = F_v - p.reference->F_star;
      }
      if (*gap_v <= cfg.gap_tol) break;
    } else if (cfg.residual_tol > 0.0 &&
               optimality_residual(p, run.state.x) <= cfg.residual_tol) {
      break;
    }
  }
  return run;
}

Vector ista_step(const CompositeProblem& p, double eta, const Vector& x) {
  if (eta <= 0.0) throw InputError("ista_step: step size must be positive");
  return p.r->prox(eta, x - eta * p.f->gradient(x));
}

namespace {

double default_eta(const CompositeProblem& p, double eta) {
  if (eta > 0.0) return eta;
  const double L = p.f->smoothness();
  if (L <= 0.0) throw ConfigError("solver: cannot derive a step from L <= 0");
  return 1.0 / L;
}

void check_gap_stopping(const CompositeProblem& p, double gap_tol,
                        const char* who) {
  if (gap_tol > 0.0 && !p.has_reference())
    throw ConfigError(std::string(who) + ": gap_tol stopping needs a reference solution");
}

}  // namespace

SolverRun ista_run(const CompositeProblem& p, const Vector& x0,
                   const IstaOptions& opts) {
  require_dimension(x0, p.dimension, "ista_run");
  check_gap_stopping(p, opts.gap_tol, "ista");
  const double eta = default_eta(p, opts.eta);

  SolverRun run;
  run.x = x0;
  if (opts.max_iter == 0) return run;
  if (opts.record_trace)
    run.trace.push_back(make_trace_row(p, 0, run.x, run.x, 0.0));

  double elapsed = 0.0;
  for (long k = 0; k < opts.max_iter; ++k) {
    const auto t0 = Clock::now();
    run.x = ista_step(p, eta, run.x);
    elapsed += seconds_between(t0, Clock::now());
    TraceRow row = make_trace_row(p, k + 1, run.x, run.x, elapsed);
    const std::optional<double> gap = row.gap_x;
    if (opts.record_trace) run.trace.push_back(std::move(row));
    if (opts.gap_tol > 0.0 && gap && *gap <= opts.gap_tol) break;
  }
  return run;
}

SolverRun fista_run(const CompositeProblem& p, const Vector& x0,
                    const FistaOptions& opts) {
  require_dimension(x0, p.dimension, "fista_run");
  check_gap_stopping(p, opts.gap_tol, "fista");
  const double eta = default_eta(p, opts.eta);

  SolverRun run;
  run.x = x0;
  if (opts.max_iter == 0) return run;
  if (opts.record_trace)
    run.trace.push_back(make_trace_row(p, 0, run.x, run.x, 0.0));

  Vector y = x0;
  double t = 1.0;
  double elapsed = 0.0;
  for (long k = 0; k < opts.max_iter; ++k) {
    const auto t0 = Clock::now();
    Vector x_prev = run.x;
    run.x = ista_step(p, eta, y);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double momentum = opts.momentum ? (t - 1.0) / t_next : 0.0;
    y = run.x + momentum * (run.x - x_prev);
    t = t_next;
    elapsed += seconds_between(t0, Clock::now());

    TraceRow row = make_trace_row(p, k + 1, run.x, run.x, elapsed);
    const std::optional<double> gap = row.gap_x;
    if (opts.record_trace) run.trace.push_back(std::move(row));
    if (opts.gap_tol > 0.0 && gap && *gap <= opts.gap_tol) break;
  }
  return run;
}

SolverRun chambolle_pock_run(const CompositeProblem& p, const Vector& x0,
                             const ChambollePockOptions& opts) {
  require_dimension(x0, p.dimension, "chambolle_pock_run");
  check_gap_stopping(p, opts.gap_tol, "chambolle-pock");
  const auto* ls = dynamic_cast<const LeastSquaresRidge*>(p.f.get());
  if (!ls)
    throw ConfigError("chambolle-pock: smooth part must be least squares");
  if (opts.theta_relax < 0.0 || opts.theta_relax > 1.0)
    throw ConfigError("chambolle-pock: theta_relax must be in [0, 1]");

  const Matrix& A = ls->design();
  const Vector& b = ls->target();
  const double lambda2 = ls->ridge();
  const double op_norm = std::sqrt(estimate_smoothness(A, 0.0));

  double sigma = opts.sigma;
  double tau = opts.tau;
  if (sigma <= 0.0) sigma = op_norm > 0.0 ? 0.99 / op_norm : 1.0;
  if (tau <= 0.0) tau = op_norm > 0.0 ? 0.99 / op_norm : 1.0;
  if (sigma * tau * op_norm * op_norm > 1.0 + 1e-12)
    throw ConfigError("chambolle-pock: sigma*tau*||A||^2 must be <= 1");

  SolverRun run;
  run.x = x0;
  if (opts.max_iter == 0) return run;
  if (opts.record_trace)
    run.trace.push_back(make_trace_row(p, 0, run.x, run.x, 0.0));

  Vector xbar = x0;
  Vector y = Vector::Zero(A.rows());
  const double ridge_shrink = 1.0 / (1.0 + lambda2 * tau);
  const double prox_scale = tau * ridge_shrink;

  double elapsed = 0.0;
  for (long k = 0; k < opts.max_iter; ++k) {
    const auto t0 = Clock::now();
    y = (y + sigma * (A * xbar - b)) / (1.0 + sigma);
    Vector x_prev = run.x;
    Vector w = run.x - tau * (A.transpose() * y);
    run.x = p.r->prox(prox_scale, ridge_shrink * w);
    xbar = run.x + opts.theta_relax * (run.x - x_prev);
    elapsed += seconds_between(t0, Clock::now());

    TraceRow row = make_trace_row(p, k + 1, run.x, run.x, elapsed);
    const std::optional<double> gap = row.gap_x;
    if (opts.record_trace) run.trace.push_back(std::move(row));
    if (opts.gap_tol > 0.0 && gap && *gap <= opts.gap_tol) break;
  }
  return run;
}

Vector averaged_iterate(const std::vector<Vector>& iterates, long k) {
  if (k < 1) throw InputError("averaged_iterate: k must be >= 1");
  if (static_cast<size_t>(k) > iterates.size())
    throw InputError("averaged_iterate: k exceeds the stored history");
  Vector mean = Vector::Zero(iterates.front().size());
  for (long i = 0; i < k; ++i) mean += iterates[static_cast<size_t>(i)];
  return mean / static_cast<double>(k);
}

SolverKind solver_from_name(const std::string& name) {
  if (name == "ista") return SolverKind::Ista;
  if (name == "fista") return SolverKind::Fista;
  if (name == "chambolle-pock" || name == "cp") return SolverKind::ChambollePock;
  if (name == "prox-naggs") return SolverKind::ProxNAGGS;
  throw ConfigError("unknown solver: " + name);
}

std::string solver_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::Ista: return "ista";
    case SolverKind::Fista: return "fista";
    case SolverKind::ChambollePock: return "chambolle-pock";
    case SolverKind::ProxNAGGS: return "prox-naggs";
  }
  return "?";
}

SolverRun run_solver(SolverKind kind, const CompositeProblem& p,
                     const Vector& x0, const DeterministicOptions& opts) {
  switch (kind) {
    case SolverKind::Ista: {
      IstaOptions o{opts.eta, opts.max_iter, opts.gap_tol, opts.record_trace};
      SolverRun run = ista_run(p, x0, o);
      run.structured = run.x;
      return run;
    }
    case SolverKind::Fista: {
      FistaOptions o{opts.eta, opts.max_iter, opts.gap_tol, opts.record_trace,
                     true};
      SolverRun run = fista_run(p, x0, o);
      run.structured = run.x;
      return run;
    }
    case SolverKind::ChambollePock: {
      ChambollePockOptions o{opts.sigma,   opts.tau_cp,  opts.theta_relax,
                             opts.max_iter, opts.gap_tol, opts.record_trace};
      SolverRun run = chambolle_pock_run(p, x0, o);
      run.structured = run.x;
      return run;
    }
    case SolverKind::ProxNAGGS: {
      ProxNAGGSConfig cfg;
      cfg.mu_hat = opts.mu_hat > 0.0 ? opts.mu_hat : p.f->smoothness();
      cfg.gamma0 = opts.gamma0 > 0.0 ? opts.gamma0 : cfg.mu_hat;
      cfg.alpha = opts.alpha;
      cfg.max_iter = opts.max_iter;
      cfg.gap_tol = opts.gap_tol;
      cfg.record_trace = opts.record_trace;
      ProxNAGGSRun run = prox_naggs_run(p, cfg, x0);
      return SolverRun{std::move(run.state.x), std::move(run.state.v),
                       std::move(run.trace)};
    }
  }
  throw ConfigError("run_solver: unhandled solver kind");
}

}  // namespace proxnag
