#ifndef PROXNAG_PROX_HPP
#define PROXNAG_PROX_HPP

#include "proxnag/regularizers.hpp"
#include "proxnag/types.hpp"

namespace proxnag {

/// Soft-thresholding: componentwise sign(z) * max(|z| - tau*lambda1, 0).
template <typename Derived>
Vector prox_l1(double lambda1, double tau, const Eigen::MatrixBase<Derived>& z) {
  const double t = tau * lambda1;
  return (z.array().sign() * (z.array().abs() - t).max(0.0)).matrix();
}

/// Blockwise shrinkage: on each group G, (1 - tau*lambda_g/||z_G||)_+ z_G,
/// with the zero block returned when z_G = 0.
Vector prox_group_l2(double lambda_g, const GroupPartition& partition,
                     double tau, const Vector& z);

/// Componentwise clamp to [lower, upper]; tau does not enter.
template <typename Derived>
Vector prox_box(const Vector& lower, const Vector& upper, double /*tau*/,
                const Eigen::MatrixBase<Derived>& z) {
  if ((lower.array() > upper.array()).any())
    throw InputError("prox_box: lower bound exceeds upper bound");
  return z.array().max(lower.array()).min(upper.array()).matrix();
}

/// Brute-force check that the closed-form prox attains the grid minimum of
///   r(u) + ||u - z||^2 / (2*tau)
/// over a cube centered at z. Only a sanity oracle: dimension must be <= 3.
/// A nonpositive half_width selects the default 2*(||z||_inf + tau*r(1) + 1).
bool prox_oracle_check(const Regularizer& r, double tau, const Vector& z,
                       int points_per_axis = 401, double half_width = 0.0);

/// Same grid search, but evaluates the given candidate point instead of
/// r.prox (used to show that perturbed outputs fail the check).
bool prox_candidate_check(const Regularizer& r, double tau, const Vector& z,
                          const Vector& candidate, int points_per_axis = 401,
                          double half_width = 0.0);

}  // namespace proxnag

#endif  // PROXNAG_PROX_HPP
