#include "proxnag/tuning.hpp"

#include <cmath>

namespace proxnag {

IterationStats iterations_to_gap(const std::vector<Trace>& traces,
                                 double gap_target, long max_iter, bool at_v) {
  if (traces.empty()) throw InputError("iterations_to_gap: no traces");
  IterationStats stats;
  double total = 0.0;
  for (const Trace& trace : traces) {
    const auto crossing = first_gap_crossing(trace, gap_target, at_v);
    if (crossing) {
      total += static_cast<double>(*crossing);
    } else {
      total += static_cast<double>(max_iter);
      ++stats.not_reached;
    }
  }
  stats.mean = total / static_cast<double>(traces.size());
  return stats;
}

namespace {

/// Iterations until F(x_k) - F* <= gap_target, without trace bookkeeping.
/// Divergence (nonfinite gradients) counts as max_iter.
long crossing_iterations(const CompositeProblem& p, double mu_hat, double alpha,
                         long max_iter, double gap_target) {
  ProxNAGGSConfig cfg;
  cfg.mu_hat = mu_hat;
  cfg.gamma0 = mu_hat;
  cfg.alpha = alpha;
  const double F_star = p.reference->F_star;

  ProxNAGGSState st = prox_naggs_init(cfg, Vector::Zero(p.dimension));
  if (composite_value(p, st.x).as_double() - F_star <= gap_target) return 0;
  for (long k = 1; k <= max_iter; ++k) {
    Vector x_next = prox_naggs_gradient_point(cfg, st);
    try {
      st = prox_naggs_step(p, cfg, st, p.f->gradient(x_next)).state;
    } catch (const NumericalError&) {
      return max_iter;
    }
    if (composite_value(p, st.x).as_double() - F_star <= gap_target) return k;
  }
  return max_iter;
}

}  // namespace

TunedProxNAGGS tune_prox_naggs(const std::vector<CompositeProblem>& instances,
                               long max_iter, double gap_target,
                               const TuningGrid& grid) {
  if (instances.empty()) throw InputError("tune_prox_naggs: no instances");
  for (const CompositeProblem& p : instances)
    if (!p.has_reference())
      throw ConfigError("tune_prox_naggs: instances need references");

  TunedProxNAGGS best;
  double best_total = std::numeric_limits<double>::infinity();
  for (double scale : grid.mu_hat_scales) {
    for (double alpha : grid.alphas) {
      double total = 0.0;
      for (const CompositeProblem& p : instances) {
        total += static_cast<double>(crossing_iterations(
            p, scale * p.f->smoothness(), alpha, max_iter, gap_target));
        if (total >= best_total) break;  // already worse than the leader
      }
      if (total < best_total) {
        best_total = total;
        best = {scale, alpha,
                total / static_cast<double>(instances.size())};
      }
    }
  }
  return best;
}

}  // namespace proxnag
