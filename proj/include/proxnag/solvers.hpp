#ifndef PROXNAG_SOLVERS_HPP
#define PROXNAG_SOLVERS_HPP

#include "proxnag/problem.hpp"
#include "proxnag/trace.hpp"
#include "proxnag/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace proxnag {

// ---------------------------------------------------------------------------
// Semi-implicit proximal solver with coupled (x, v) sequences.
// ---------------------------------------------------------------------------

struct ProxNAGGSConfig {
  double mu_hat = 1.0;   // quadratic weight of the proximal subproblem
  double gamma0 = 1.0;   // damping state; gamma0 == mu_hat keeps b_k == a_k
  double alpha = 1.0;    // constant step parameter, a = alpha/(1+alpha)
  long max_iter = 1000;
  double gap_tol = 0.0;       // 0 disables; needs a reference solution
  double residual_tol = 0.0;  // fallback stop on the fixed-point residual at
                              // x_k when no reference is available
  bool record_trace = true;
  bool record_iterates = false;  // keep the v_k history

  double a() const { return alpha / (1.0 + alpha); }
  bool constant_regime() const { return gamma0 == mu_hat; }
  void validate() const;
};

struct ProxNAGGSState {
  Vector x;
  Vector v;
  double gamma = 0.0;
  long k = 0;
};

ProxNAGGSState prox_naggs_init(const ProxNAGGSConfig& cfg, const Vector& x0);

/// Quantities produced by one coupled step, indexed at the new iterate:
/// z is the interpolation point the prox was taken from, q = (mu_hat/b)(z - v)
/// recovers the prox optimality condition, and s = q - g is the regularizer
/// subgradient it certifies.
struct ProxStepDiagnostics {
  Vector z;
  Vector q;
  Vector s;
  double D = 0.0;  // ||x_k - v_k||^2 before the step
  double R = 0.0;  // ||v_{k+1} - z_{k+1}||^2
  double M = 0.0;  // ||v_{k+1} - x_{k+1}||^2
};

/// Point the gradient must be evaluated at: x_{k+1} = (1-a)x_k + a v_k.
Vector prox_naggs_gradient_point(const ProxNAGGSConfig& cfg,
                                 const ProxNAGGSState& st);

struct ProxNAGGSStepResult {
  ProxNAGGSState state;
  ProxStepDiagnostics diag;
};

/// One step given the (possibly stochastic) gradient at x_{k+1}:
///   b_k = alpha*mu_hat / (alpha*mu_hat + gamma_k)
///   z_{k+1} = (1-b_k) v_k + b_k x_{k+1}
///   v_{k+1} = prox_{(b_k/mu_hat) r}(z_{k+1} - (b_k/mu_hat) g)
///   gamma_{k+1} = (1-a_k) gamma_k + a_k mu_hat
ProxNAGGSStepResult prox_naggs_step(const CompositeProblem& p,
                                    const ProxNAGGSConfig& cfg,
                                    const ProxNAGGSState& st, const Vector& g);

/// Gradient override for stochastic runs; receives (x_{k+1}, k).
using GradientSource = std::function<Vector(const Vector&, long)>;

struct ProxNAGGSRun {
  ProxNAGGSState state;
  Trace trace;
  std::vector<Vector> v_history;  // v_0..v_K when record_iterates
};

/// Runs until max_iter or, when gap_tol > 0, until F(v_k) - F* <= gap_tol
/// (requires a reference on p). With record_trace the trace holds rows for
/// k = 0..K; no rows are produced when max_iter == 0.
ProxNAGGSRun prox_naggs_run(const CompositeProblem& p,
                            const ProxNAGGSConfig& cfg, const Vector& x0,
                            const GradientSource& grad_source = {});

// ---------------------------------------------------------------------------
// Baselines.
// ---------------------------------------------------------------------------

struct SolverRun {
  Vector x;           // reported iterate
  Vector structured;  // iterate carrying the prox sparsity pattern; equals x
                      // for single-sequence solvers, v for the coupled one
  Trace trace;
};

/// Forward-backward step x+ = prox_{eta r}(x - eta grad f(x)).
Vector ista_step(const CompositeProblem& p, double eta, const Vector& x);

struct IstaOptions {
  double eta = 0.0;  // <= 0 selects 1/L
  long max_iter = 1000;
  double gap_tol = 0.0;
  bool record_trace = true;
};

SolverRun ista_run(const CompositeProblem& p, const Vector& x0,
                   const IstaOptions& opts);

struct FistaOptions {
  double eta = 0.0;  // <= 0 selects 1/L
  long max_iter = 1000;
  double gap_tol = 0.0;
  bool record_trace = true;
  bool momentum = true;  // false degenerates to ista
};

/// t_1 = 1, t_{k+1} = (1 + sqrt(1+4 t_k^2))/2,
/// y_{k+1} = x_{k+1} + ((t_k - 1)/t_{k+1})(x_{k+1} - x_k).
SolverRun fista_run(const CompositeProblem& p, const Vector& x0,
                    const FistaOptions& opts);

struct ChambollePockOptions {
  double sigma = 0.0;       // <= 0 selects 0.99/||A||
  double tau = 0.0;         // <= 0 selects 0.99/||A||
  double theta_relax = 1.0; // in [0, 1]
  long max_iter = 1000;
  double gap_tol = 0.0;
  bool record_trace = true;
};

/// Primal-dual iteration on the saddle form of the least-squares data term,
///   min_x max_y <Ax, y> - (0.5||y||^2 + <b, y>) + 0.5*lambda2||x||^2 + r(x),
/// dual prox (y + sigma*A xbar - sigma*b)/(1+sigma), ridge folded into the
/// primal prox in closed form. Requires sigma*tau*||A||^2 <= 1 and a
/// least-squares smooth part.
SolverRun chambolle_pock_run(const CompositeProblem& p, const Vector& x0,
                             const ChambollePockOptions& opts);

/// Mean of the first k entries of the iterate history.
Vector averaged_iterate(const std::vector<Vector>& iterates, long k);

// ---------------------------------------------------------------------------
// Name-based dispatch shared by the CLI and the benchmark harness.
// ---------------------------------------------------------------------------

enum class SolverKind { Ista, Fista, ChambollePock, ProxNAGGS };

SolverKind solver_from_name(const std::string& name);
std::string solver_name(SolverKind kind);

struct DeterministicOptions {
  long max_iter = 1000;
  double gap_tol = 0.0;
  bool record_trace = true;
  // prox-naggs; mu_hat <= 0 selects L, gamma0 <= 0 selects mu_hat
  double mu_hat = 0.0;
  double alpha = 1.0;
  double gamma0 = 0.0;
  // ista / fista
  double eta = 0.0;
  // chambolle-pock
  double sigma = 0.0;
  double tau_cp = 0.0;
  double theta_relax = 1.0;
};

SolverRun run_solver(SolverKind kind, const CompositeProblem& p,
                     const Vector& x0, const DeterministicOptions& opts);

}  // namespace proxnag

#endif  // PROXNAG_SOLVERS_HPP
