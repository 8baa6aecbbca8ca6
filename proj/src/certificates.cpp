#include "proxnag/certificates.hpp"

#include "proxnag/solvers.hpp"

#include <algorithm>
#include <cmath>

namespace proxnag {

LyapunovParams compute_params(double a, double mu_hat, double L, double mu_f,
                              double mu_F, std::optional<double> c_choice) {
  if (!(a > 0.0 && a < 1.0))
    throw InputError("compute_params: a must lie in (0, 1)");
  if (mu_hat <= 0.0) throw InputError("compute_params: mu_hat must be positive");
  if (mu_f < 0.0 || mu_F < 0.0 || L < 0.0)
    throw InputError("compute_params: curvature constants must be nonnegative");

  LyapunovParams params;
  params.a = a;
  params.mu_hat = mu_hat;
  params.L = L;
  params.mu_f = mu_f;
  params.mu_F = mu_F;
  params.theory_regime = mu_hat >= L;
  params.b = mu_hat / (2.0 * a);
  params.beta = 0.5 * (mu_hat - mu_f);
  params.c_lower = params.beta * (1.0 - a) / a;
  params.c_upper = (mu_hat + mu_F) / (2.0 * a) - params.beta;

  if (mu_f + mu_F <= 0.0)
    throw DegenerateIntervalError(
        "compute_params: mu_f = mu_F = 0 leaves no admissible c; use the "
        "convex-case energy certificate instead");

  if (c_choice) {
    params.c = *c_choice;
    if (params.c <= 0.0)
      throw InputError("compute_params: c must be positive");
  } else {
    params.c = 0.5 * (std::max(params.c_lower, 0.0) + params.c_upper);
  }

  const double first = (params.b * (1.0 - a) + a * (params.beta + params.c)) /
                       (params.b + 0.5 * mu_F);
  const double second = (1.0 - a) * (params.beta + params.c) / params.c;
  params.theta = std::max(first, second);
  return params;
}

double lyapunov_value(const LyapunovParams& params, double F_v_gap, double V,
                      double X) {
  return F_v_gap + params.b * V + params.c * X;
}

double convex_energy(double mu_hat, double a, double F_v_gap, double V,
                     double X) {
  return F_v_gap + mu_hat / (2.0 * a) * V + mu_hat * (1.0 - a) / (2.0 * a) * X;
}

namespace {

double row_field(const TraceRow& row, const std::optional<double>& field,
                 const char* name) {
  if (!field)
    throw InputError(std::string("certificate check: row ") +
                     std::to_string(row.k) + " is missing " + name);
  return *field;
}

double row_lyapunov(const TraceRow& row, const LyapunovParams& params) {
  return lyapunov_value(params, row_field(row, row.gap_v, "gap_v"),
                        row_field(row, row.V, "V"), row_field(row, row.X, "X"));
}

double row_energy(const TraceRow& row, double mu_hat, double a) {
  return convex_energy(mu_hat, a, row_field(row, row.gap_v, "gap_v"),
                       row_field(row, row.V, "V"), row_field(row, row.X, "X"));
}

}  // namespace

void annotate_lyapunov(Trace& trace, const LyapunovParams& params) {
  for (TraceRow& row : trace) row.lyap = row_lyapunov(row, params);
}

void annotate_convex_energy(Trace& trace, double mu_hat, double a) {
  for (TraceRow& row : trace) row.energy = row_energy(row, mu_hat, a);
}

std::vector<Violation> check_contraction(const Trace& trace,
                                         const LyapunovParams& params,
                                         double rel_tol) {
  if (trace.size() < 2)
    throw InputError("check_contraction: need at least two trace rows");

  std::vector<Violation> violations;
  const double lyap0 = row_lyapunov(trace.front(), params);
  double envelope = lyap0;
  double prev = lyap0;
  for (size_t i = 1; i < trace.size(); ++i) {
    const double cur = row_lyapunov(trace[i], params);
    const double step_slack = cur - params.theta * prev;
    if (step_slack > rel_tol * std::max(1.0, prev))
      violations.push_back({trace[i - 1].k, "contraction", step_slack});
    envelope *= params.theta;
    const double env_slack = cur - envelope;
    if (env_slack > rel_tol * std::max(1.0, cur))
      violations.push_back({trace[i].k, "envelope", env_slack});
    prev = cur;
  }
  return violations;
}

std::vector<Violation> check_mismatch_absorption(const Trace& trace,
                                                 double mu_hat, double L,
                                                 double a, double abs_tol) {
  if (trace.size() < 2)
    throw InputError("check_mismatch_absorption: need at least two trace rows");

  std::vector<Violation> violations;
  const double pow1ma3 = (1.0 - a) * (1.0 - a) * (1.0 - a);
  for (size_t i = 0; i + 1 < trace.size(); ++i) {
    const double D = row_field(trace[i], trace[i].D, "D");
    const double R = row_field(trace[i + 1], trace[i + 1].R, "R");
    const double M = row_field(trace[i + 1], trace[i + 1].M, "M");
    const double value =
        -0.5 * mu_hat * pow1ma3 * D - mu_hat / (2.0 * a) * R + 0.5 * L * M;
    const double tol = abs_tol * std::max(1.0, mu_hat * (D + R + M));
    if (value > tol) violations.push_back({trace[i].k, "mismatch", value});
  }
  return violations;
}

std::optional<long> gap_coupling_burn_in(const Trace& trace, double rel,
                                         double eps) {
  if (trace.empty()) throw InputError("gap_coupling_burn_in: empty trace");
  long burn_in = trace.front().k;
  bool last_ok = false;
  for (const TraceRow& row : trace) {
    const double gx = row_field(row, row.gap_x, "gap_x");
    const double gv = row_field(row, row.gap_v, "gap_v");
    if (std::abs(gx - gv) <= rel * std::max(std::abs(gx), eps)) {
      last_ok = true;
    } else {
      burn_in = row.k + 1;
      last_ok = false;
    }
  }
  if (!last_ok) return std::nullopt;
  return burn_in;
}

ConvexDescentReport check_convex_descent(const Trace& trace, double mu_hat,
                                         double a, double rel_tol,
                                         const CompositeProblem* p,
                                         const std::vector<Vector>* v_history,
                                         const std::vector<long>& checkpoints) {
  if (trace.size() < 2)
    throw InputError("check_convex_descent: need at least two trace rows");

  ConvexDescentReport report;
  report.energy0 = row_energy(trace.front(), mu_hat, a);

  double prev_energy = report.energy0;
  double gap_sum = 0.0;
  double min_gap = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < trace.size(); ++i) {
    const TraceRow& before = trace[i - 1];
    const double G = row_field(before, before.gap_v, "gap_v");
    const double D = row_field(before, before.D, "D");
    const double energy = row_energy(trace[i], mu_hat, a);
    const double slack =
        energy - (prev_energy - G - 0.5 * mu_hat * (1.0 - a) * D);
    if (slack > rel_tol * std::max(1.0, prev_energy))
      report.violations.push_back({before.k, "descent", slack});

    gap_sum += G;
    min_gap = std::min(min_gap, G);
    const double tol = rel_tol * std::max(1.0, report.energy0);
    if (gap_sum > report.energy0 + tol) report.sum_gap_ok = false;
    const double k = static_cast<double>(i);  // rows are consecutive
    if (min_gap > report.energy0 / k + tol) report.best_rate_ok = false;
    prev_energy = energy;
  }

  if (p && v_history) {
    if (!p->has_reference())
      throw InputError("check_convex_descent: ergodic check needs a reference");
    for (long k : checkpoints) {
      if (k < 1 || static_cast<size_t>(k) > v_history->size()) continue;
      Vector vbar = averaged_iterate(*v_history, k);
      const double gap =
          composite_value(*p, vbar).as_double() - p->reference->F_star;
      report.ergodic_values.emplace_back(k, gap);
      const double tol = rel_tol * std::max(1.0, report.energy0);
      if (gap > report.energy0 / static_cast<double>(k) + tol)
        report.ergodic_rate_ok = false;
    }
  }
  return report;
}

}  // namespace proxnag
