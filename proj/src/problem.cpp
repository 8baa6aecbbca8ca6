#include "proxnag/problem.hpp"

namespace proxnag {

CompositeProblem::CompositeProblem(std::shared_ptr<const SmoothOracle> smooth,
                                   std::shared_ptr<const Regularizer> reg)
    : f(std::move(smooth)), r(std::move(reg)) {
  if (!f || !r) throw InputError("CompositeProblem: null component");
  dimension = f->dimension();
  mu_F = f->strong_convexity();
}

ExtendedValue composite_value(const CompositeProblem& p, const Vector& x) {
  require_dimension(x, p.dimension, "composite_value");
  const ExtendedValue rv = p.r->evaluate(x);
  if (rv.infinite) return ExtendedValue::infinity();
  return ExtendedValue::finite(p.f->evaluate(x) + rv.value);
}

double optimality_residual(const CompositeProblem& p, const Vector& x) {
  require_dimension(x, p.dimension, "optimality_residual");
  const double L = p.f->smoothness();
  if (L <= 0.0) throw InputError("optimality_residual: smoothness must be positive");
  const double eta = 1.0 / L;
  Vector step = p.r->prox(eta, x - eta * p.f->gradient(x));
  return (x - step).norm();
}

}  // namespace proxnag
