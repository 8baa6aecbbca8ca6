#ifndef PROXNAG_STOCHASTIC_HPP
#define PROXNAG_STOCHASTIC_HPP

#include "proxnag/problem.hpp"
#include "proxnag/solvers.hpp"
#include "proxnag/trace.hpp"

#include <cstdint>
#include <functional>

namespace proxnag {

/// Mini-batch schedule shared by the stochastic solvers. Each epoch shuffles
/// the sample indices with the seeded generator and walks them in consecutive
/// batches; a batch covering the whole dataset falls back to the exact full
/// gradient so full-batch runs reproduce the deterministic solvers bitwise.
struct StochasticOptions {
  double eta = 0.01;  // prox-sgd step size (constant unless eta_schedule set)
  std::function<double(long)> eta_schedule;  // step index -> step size
  int batch_size = 32;
  int epochs = 10;
  std::uint64_t seed = 0;
  double sparsity_threshold = 1e-8;
  std::function<double(const Vector&)> test_accuracy;  // optional per-epoch hook
};

struct ProxSGDRun {
  Vector x;
  EpochTrace epochs;
};

/// x+ = prox_{eta r}(x - eta g_batch), one pass per epoch, full objective
/// evaluated on the whole training set after each epoch.
ProxSGDRun prox_sgd_run(const CompositeProblem& p, const Vector& x0,
                        const StochasticOptions& opts);

struct StochasticProxNAGGSRun {
  ProxNAGGSState state;
  EpochTrace epochs;
};

/// Same epoch schedule, but each mini-batch gradient feeds the coupled
/// proximal step at x_{k+1}.
StochasticProxNAGGSRun stochastic_prox_naggs_run(const CompositeProblem& p,
                                                 const ProxNAGGSConfig& cfg,
                                                 const Vector& x0,
                                                 const StochasticOptions& opts);

}  // namespace proxnag

#endif  // PROXNAG_STOCHASTIC_HPP
