#include "proxnag/regularizers.hpp"

#include "proxnag/prox.hpp"

#include <algorithm>
#include <cmath>

namespace proxnag {

GroupPartition::GroupPartition(std::vector<std::vector<Index>> groups,
                               Index dimension)
    : groups_(std::move(groups)), dimension_(dimension) {
  std::vector<char> seen(static_cast<size_t>(dimension), 0);
  Index covered = 0;
  for (const auto& g : groups_) {
    if (g.empty()) throw InputError("GroupPartition: empty group");
    for (Index i : g) {
      if (i < 0 || i >= dimension)
        throw InputError("GroupPartition: index out of range");
      if (seen[static_cast<size_t>(i)])
        throw InputError("GroupPartition: groups overlap at index " +
                         std::to_string(i));
      seen[static_cast<size_t>(i)] = 1;
      ++covered;
    }
  }
  if (covered != dimension)
    throw InputError("GroupPartition: groups do not cover the index range");
}

GroupPartition GroupPartition::contiguous(Index dimension, Index block_size) {
  if (block_size < 1 || dimension % block_size != 0)
    throw InputError("GroupPartition::contiguous: dimension not divisible by block size");
  std::vector<std::vector<Index>> groups;
  groups.reserve(static_cast<size_t>(dimension / block_size));
  for (Index start = 0; start < dimension; start += block_size) {
    std::vector<Index> g(static_cast<size_t>(block_size));
    for (Index j = 0; j < block_size; ++j) g[static_cast<size_t>(j)] = start + j;
    groups.push_back(std::move(g));
  }
  return GroupPartition(std::move(groups), dimension);
}

GroupPartition GroupPartition::matrix_rows(Index features, Index classes) {
  if (features < 1 || classes < 1)
    throw InputError("GroupPartition::matrix_rows: sizes must be positive");
  std::vector<std::vector<Index>> groups(static_cast<size_t>(features));
  for (Index j = 0; j < features; ++j) {
    auto& g = groups[static_cast<size_t>(j)];
    g.resize(static_cast<size_t>(classes));
    for (Index c = 0; c < classes; ++c)
      g[static_cast<size_t>(c)] = c * features + j;
  }
  return GroupPartition(std::move(groups), features * classes);
}

L1Penalty::L1Penalty(double lambda1) : lambda1_(lambda1) {
  if (lambda1_ < 0.0) throw InputError("L1Penalty: weight must be nonnegative");
}

ExtendedValue L1Penalty::evaluate(const Vector& x) const {
  return ExtendedValue::finite(lambda1_ * x.lpNorm<1>());
}

Vector L1Penalty::prox(double lambda, const Vector& z) const {
  return prox_l1(lambda1_, lambda, z);
}

GroupL2Penalty::GroupL2Penalty(double lambda_g, GroupPartition partition)
    : lambda_g_(lambda_g), partition_(std::move(partition)) {
  if (lambda_g_ < 0.0)
    throw InputError("GroupL2Penalty: weight must be nonnegative");
}

ExtendedValue GroupL2Penalty::evaluate(const Vector& x) const {
  require_dimension(x, partition_.dimension(), "GroupL2Penalty::evaluate");
  double total = 0.0;
  for (const auto& g : partition_.groups()) {
    double sq = 0.0;
    for (Index i : g) sq += x[i] * x[i];
    total += std::sqrt(sq);
  }
  return ExtendedValue::finite(lambda_g_ * total);
}

Vector GroupL2Penalty::prox(double lambda, const Vector& z) const {
  return prox_group_l2(lambda_g_, partition_, lambda, z);
}

Vector prox_group_l2(double lambda_g, const GroupPartition& partition,
                     double tau, const Vector& z) {
  require_dimension(z, partition.dimension(), "prox_group_l2");
  if (tau <= 0.0) throw InputError("prox_group_l2: tau must be positive");
  const double t = tau * lambda_g;
  Vector out(z.size());
  for (const auto& g : partition.groups()) {
    double sq = 0.0;
    for (Index i : g) sq += z[i] * z[i];
    const double norm = std::sqrt(sq);
    const double scale = norm > t ? 1.0 - t / norm : 0.0;
    for (Index i : g) out[i] = scale * z[i];
  }
  return out;
}

BoxIndicator::BoxIndicator(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size())
    throw InputError("BoxIndicator: bound dimensions differ");
  if ((lower_.array() > upper_.array()).any())
    throw InputError("BoxIndicator: lower bound exceeds upper bound");
}

ExtendedValue BoxIndicator::evaluate(const Vector& x) const {
  require_dimension(x, lower_.size(), "BoxIndicator::evaluate");
  const bool inside =
      (x.array() >= lower_.array()).all() && (x.array() <= upper_.array()).all();
  return inside ? ExtendedValue::finite(0.0) : ExtendedValue::infinity();
}

Vector BoxIndicator::prox(double lambda, const Vector& z) const {
  require_dimension(z, lower_.size(), "BoxIndicator::prox");
  return prox_box(lower_, upper_, lambda, z);
}

namespace {

double prox_objective(const Regularizer& r, double tau, const Vector& z,
                      const Vector& u) {
  const ExtendedValue rv = r.evaluate(u);
  if (rv.infinite) return std::numeric_limits<double>::infinity();
  return rv.value + (u - z).squaredNorm() / (2.0 * tau);
}

double grid_minimum(const Regularizer& r, double tau, const Vector& z,
                    int points_per_axis, double half_width) {
  const Index d = z.size();
  if (d > 3) throw InputError("prox_oracle_check: dimension must be <= 3");
  if (points_per_axis < 2)
    throw InputError("prox_oracle_check: need at least 2 points per axis");

  if (half_width <= 0.0) {
    const ExtendedValue r_ones = r.evaluate(Vector::Ones(d));
    const double penalty_scale = r_ones.infinite ? 0.0 : r_ones.value;
    half_width = 2.0 * (z.lpNorm<Eigen::Infinity>() + tau * penalty_scale + 1.0);
  }
  const double step = 2.0 * half_width / (points_per_axis - 1);

  Vector u(d);
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> idx(static_cast<size_t>(d), 0);
  while (true) {
    for (Index k = 0; k < d; ++k)
      u[k] = z[k] - half_width + step * idx[static_cast<size_t>(k)];
    best = std::min(best, prox_objective(r, tau, z, u));
    Index k = 0;
    for (; k < d; ++k) {
      if (++idx[static_cast<size_t>(k)] < points_per_axis) break;
      idx[static_cast<size_t>(k)] = 0;
    }
    if (k == d) break;
  }
  return best;
}

}  // namespace

bool prox_candidate_check(const Regularizer& r, double tau, const Vector& z,
                          const Vector& candidate, int points_per_axis,
                          double half_width) {
  if (tau <= 0.0) throw InputError("prox_oracle_check: tau must be positive");
  const double grid_min =
      grid_minimum(r, tau, z, points_per_axis, half_width);
  const double candidate_value = prox_objective(r, tau, z, candidate);
  return candidate_value <= grid_min + 1e-6;
}

bool prox_oracle_check(const Regularizer& r, double tau, const Vector& z,
                       int points_per_axis, double half_width) {
  return prox_candidate_check(r, tau, z, r.prox(tau, z), points_per_axis,
                              half_width);
}

}  // namespace proxnag
