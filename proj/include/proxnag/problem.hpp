#ifndef PROXNAG_PROBLEM_HPP
#define PROXNAG_PROBLEM_HPP

#include "proxnag/regularizers.hpp"
#include "proxnag/smooth.hpp"
#include "proxnag/types.hpp"

#include <memory>
#include <optional>
#include <string>

namespace proxnag {

/// High-precision minimizer (x*, F*) with the optimality residual it was
/// accepted at. Attached to a problem so solvers can report gaps.
struct ReferenceSolution {
  Vector x_star;
  double F_star = 0.0;
  double residual = 0.0;
  std::string method;
};

/// F = f + r. Immutable after construction and safe to share across
/// concurrent solver runs.
struct CompositeProblem {
  std::shared_ptr<const SmoothOracle> f;
  std::shared_ptr<const Regularizer> r;
  Index dimension = 0;
  /// Strong convexity of the full objective F, at least f's constant.
  /// Defaults to f's constant since a convex r adds no curvature we can use.
  double mu_F = 0.0;
  std::optional<ReferenceSolution> reference;

  CompositeProblem() = default;
  CompositeProblem(std::shared_ptr<const SmoothOracle> smooth,
                   std::shared_ptr<const Regularizer> reg);

  bool has_reference() const { return reference.has_value(); }
  double gap(double value) const { return value - reference->F_star; }
};

/// F(x) = f(x) + r(x), infinite when an indicator makes x infeasible.
ExtendedValue composite_value(const CompositeProblem& p, const Vector& x);

/// Fixed-point residual of the forward-backward map at step 1/L:
///   || x - prox_{r/L}(x - grad f(x)/L) ||.
/// Zero exactly at minimizers of F.
double optimality_residual(const CompositeProblem& p, const Vector& x);

}  // namespace proxnag

#endif  // PROXNAG_PROBLEM_HPP
