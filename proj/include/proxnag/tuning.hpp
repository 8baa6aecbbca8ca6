#ifndef PROXNAG_TUNING_HPP
#define PROXNAG_TUNING_HPP

#include "proxnag/problem.hpp"
#include "proxnag/solvers.hpp"

#include <vector>

namespace proxnag {

/// Deterministic replacement for black-box tuning: every grid point runs on
/// every instance and the point with the smallest total iterations-to-gap
/// wins. Ties keep the earlier grid point, so results are reproducible.
struct TuningGrid {
  std::vector<double> mu_hat_scales{1.0, 0.3, 0.1, 0.03};
  std::vector<double> alphas{1.0, 3.0, 10.0, 30.0};
};

struct TunedProxNAGGS {
  double mu_hat_scale = 1.0;  // mu_hat = scale * L per instance
  double alpha = 1.0;
  double mean_iterations = 0.0;  // at the winning grid point
};

/// Instances must carry references; the gap is measured at the x iterate and
/// a run that never crosses (or diverges) counts as max_iter iterations.
/// Runs are fixed-length and trace-free, so the sweep stays cheap.
TunedProxNAGGS tune_prox_naggs(const std::vector<CompositeProblem>& instances,
                               long max_iter, double gap_target = 1e-6,
                               const TuningGrid& grid = {});

/// Mean first-crossing index over per-seed traces; not-reached runs count as
/// max_iter. Returns the mean and how many runs never crossed.
struct IterationStats {
  double mean = 0.0;
  int not_reached = 0;
};

IterationStats iterations_to_gap(const std::vector<Trace>& traces,
                                 double gap_target, long max_iter,
                                 bool at_v = false);

}  // namespace proxnag

#endif  // PROXNAG_TUNING_HPP
