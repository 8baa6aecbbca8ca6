#ifndef PROXNAG_REGULARIZERS_HPP
#define PROXNAG_REGULARIZERS_HPP

#include "proxnag/types.hpp"

#include <vector>

namespace proxnag {

/// Disjoint index sets covering {0..d-1}. Groups need not be contiguous;
/// the flattened softmax variable groups one feature across all classes.
class GroupPartition {
 public:
  GroupPartition(std::vector<std::vector<Index>> groups, Index dimension);

  /// Contiguous blocks of equal size (dimension must be divisible).
  static GroupPartition contiguous(Index dimension, Index block_size);
  /// One group per feature row of a column-major flattened d x C matrix:
  /// group j = { j, d+j, ..., (C-1)d+j }.
  static GroupPartition matrix_rows(Index features, Index classes);

  const std::vector<std::vector<Index>>& groups() const { return groups_; }
  Index dimension() const { return dimension_; }
  Index group_count() const { return static_cast<Index>(groups_.size()); }

 private:
  std::vector<std::vector<Index>> groups_;
  Index dimension_;
};

/// Convex, proximable regularizer r. Penalty weights live inside the object;
/// callers pass only the prox scale lambda, i.e. prox(lambda, z) solves
///   argmin_u  r(u) + ||u - z||^2 / (2*lambda).
class Regularizer {
 public:
  virtual ~Regularizer() = default;
  virtual ExtendedValue evaluate(const Vector& x) const = 0;
  virtual Vector prox(double lambda, const Vector& z) const = 0;
};

/// r = 0; prox is the identity. Used for smooth problems.
class ZeroRegularizer : public Regularizer {
 public:
  ExtendedValue evaluate(const Vector&) const override {
    return ExtendedValue::finite(0.0);
  }
  Vector prox(double, const Vector& z) const override { return z; }
};

/// r(x) = lambda1 * ||x||_1.
class L1Penalty : public Regularizer {
 public:
  explicit L1Penalty(double lambda1);
  ExtendedValue evaluate(const Vector& x) const override;
  Vector prox(double lambda, const Vector& z) const override;
  double weight() const { return lambda1_; }

 private:
  double lambda1_;
};

/// r(x) = lambda_g * sum_G ||x_G||_2.
class GroupL2Penalty : public Regularizer {
 public:
  GroupL2Penalty(double lambda_g, GroupPartition partition);
  ExtendedValue evaluate(const Vector& x) const override;
  Vector prox(double lambda, const Vector& z) const override;
  double weight() const { return lambda_g_; }
  const GroupPartition& partition() const { return partition_; }

 private:
  double lambda_g_;
  GroupPartition partition_;
};

/// Indicator of the box [lower, upper]; prox is the clamp, independent of
/// the prox scale.
class BoxIndicator : public Regularizer {
 public:
  BoxIndicator(Vector lower, Vector upper);
  ExtendedValue evaluate(const Vector& x) const override;
  Vector prox(double lambda, const Vector& z) const override;

 private:
  Vector lower_, upper_;
};

}  // namespace proxnag

#endif  // PROXNAG_REGULARIZERS_HPP
