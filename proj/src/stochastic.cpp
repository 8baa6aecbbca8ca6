#include "proxnag/stochastic.hpp"

#include "proxnag/problems.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>

namespace proxnag {

namespace {

using Clock = std::chrono::steady_clock;

const FiniteSumOracle& require_sampled(const CompositeProblem& p,
                                       const char* who) {
  const auto* fs = dynamic_cast<const FiniteSumOracle*>(p.f.get());
  if (!fs)
    throw ConfigError(std::string(who) + ": smooth part has no sample structure");
  if (fs->sample_count() == 0)
    throw InputError(std::string(who) + ": empty dataset");
  return *fs;
}

void validate_options(const StochasticOptions& opts, Index n, const char* who) {
  if (opts.batch_size < 1)
    throw ConfigError(std::string(who) + ": batch_size must be >= 1");
  if (opts.batch_size > n)
    throw InputError(std::string(who) + ": batch_size exceeds the dataset");
  if (opts.epochs < 0)
    throw ConfigError(std::string(who) + ": epochs must be nonnegative");
}

double step_size(const StochasticOptions& opts, long step) {
  return opts.eta_schedule ? opts.eta_schedule(step) : opts.eta;
}

EpochRow evaluate_epoch(const CompositeProblem& p, const FiniteSumOracle& fs,
                        const StochasticOptions& opts, long epoch,
                        const Vector& x, double elapsed) {
  EpochRow row;
  row.epoch = epoch;
  row.objective = composite_value(p, x).as_double();
  row.data_fit = fs.data_fit(x);
  row.reg_term = row.objective - row.data_fit;
  if (opts.test_accuracy) row.test_accuracy = opts.test_accuracy(x);
  row.sparsity = sparsity(x, opts.sparsity_threshold);
  row.elapsed_s = elapsed;
  return row;
}

/// Walks the epoch in shuffled consecutive batches, invoking step(g, k) with
/// the batch gradient at the point the caller wants it evaluated at.
template <typename GradPoint, typename Step>
void run_epochs(const CompositeProblem& p, const FiniteSumOracle& fs,
                const StochasticOptions& opts, GradPoint grad_point, Step step,
                EpochTrace& trace,
                const std::function<EpochRow(long, double)>& evaluate) {
  const Index n = fs.sample_count();
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(opts.seed);

  trace.push_back(evaluate(0, 0.0));
  double elapsed = 0.0;
  long global_step = 0;
  std::vector<int> batch;
  for (int epoch = 1; epoch <= opts.epochs; ++epoch) {
    const auto t0 = Clock::now();
    std::shuffle(order.begin(), order.end(), rng);
    for (Index start = 0; start < n; start += opts.batch_size) {
      const Index end = std::min<Index>(start + opts.batch_size, n);
      const Vector& at = grad_point();
      Vector g;
      if (end - start == n) {
        g = p.f->gradient(at);  // exact full gradient, same path as the
                                // deterministic solvers
      } else {
        batch.assign(order.begin() + start, order.begin() + end);
        g = fs.batch_gradient(at, batch);
      }
      step(g, global_step);
      ++global_step;
    }
    elapsed += std::chrono::duration<double>(Clock::now() - t0).count();
    trace.push_back(evaluate(epoch, elapsed));
  }
}

}  // namespace

ProxSGDRun prox_sgd_run(const CompositeProblem& p, const Vector& x0,
                        const StochasticOptions& opts) {
  const FiniteSumOracle& fs = require_sampled(p, "prox-sgd");
  require_dimension(x0, p.dimension, "prox_sgd_run");
  validate_options(opts, fs.sample_count(), "prox-sgd");

  ProxSGDRun run;
  run.x = x0;
  run_epochs(
      p, fs, opts, [&]() -> const Vector& { return run.x; },
      [&](const Vector& g, long k) {
        const double eta = step_size(opts, k);
        run.x = p.r->prox(eta, run.x - eta * g);
      },
      run.epochs,
      [&](long epoch, double elapsed) {
        return evaluate_epoch(p, fs, opts, epoch, run.x, elapsed);
      });
  return run;
}

StochasticProxNAGGSRun stochastic_prox_naggs_run(const CompositeProblem& p,
                                                 const ProxNAGGSConfig& cfg,
                                                 const Vector& x0,
                                                 const StochasticOptions& opts) {
  const FiniteSumOracle& fs = require_sampled(p, "stochastic prox-naggs");
  require_dimension(x0, p.dimension, "stochastic_prox_naggs_run");
  validate_options(opts, fs.sample_count(), "stochastic prox-naggs");
  cfg.validate();

  StochasticProxNAGGSRun run;
  run.state = prox_naggs_init(cfg, x0);
  Vector eval_point;
  run_epochs(
      p, fs, opts,
      [&]() -> const Vector& {
        eval_point = prox_naggs_gradient_point(cfg, run.state);
        return eval_point;
      },
      [&](const Vector& g, long) {
        run.state = prox_naggs_step(p, cfg, run.state, g).state;
      },
      run.epochs,
      [&](long epoch, double elapsed) {
        return evaluate_epoch(p, fs, opts, epoch, run.state.x, elapsed);
      });
  return run;
}

}  // namespace proxnag
