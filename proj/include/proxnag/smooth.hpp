#ifndef PROXNAG_SMOOTH_HPP
#define PROXNAG_SMOOTH_HPP

#include "proxnag/types.hpp"

#include <vector>

namespace proxnag {

/// Smooth part of a composite objective: value, gradient, and the two
/// curvature constants every solver and certificate needs.
class SmoothOracle {
 public:
  virtual ~SmoothOracle() = default;

  virtual double evaluate(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  virtual Index dimension() const = 0;

  /// Smoothness constant L (Lipschitz constant of the gradient).
  virtual double smoothness() const = 0;
  /// Strong convexity constant of the smooth part, zero if merely convex.
  virtual double strong_convexity() const = 0;
};

/// Largest eigenvalue of A^T A plus the ridge weight, i.e. the smoothness
/// constant of x -> 0.5*||Ax-b||^2 + 0.5*lambda2*||x||^2. Power iteration
/// with a deterministic all-ones start so repeated runs agree bitwise.
double estimate_smoothness(const Matrix& A, double lambda2, int iters = 1000,
                           double tol = 1e-10);

/// Smallest eigenvalue of A^T A (zero when A has more columns than rows).
/// Dense symmetric eigensolve; power iteration stalls when the low end of
/// the spectrum is clustered, which the conditioned instances are.
double smallest_gram_eigenvalue(const Matrix& A);

/// f(x) = 0.5*||Ax - b||^2 + 0.5*lambda2*||x||^2.
class LeastSquaresRidge : public SmoothOracle {
 public:
  LeastSquaresRidge(Matrix A, Vector b, double lambda2);

  double evaluate(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Index dimension() const override { return A_.cols(); }
  double smoothness() const override { return smoothness_; }
  double strong_convexity() const override { return strong_convexity_; }

  const Matrix& design() const { return A_; }
  const Vector& target() const { return b_; }
  double ridge() const { return lambda2_; }

 private:
  Matrix A_;
  Vector b_;
  double lambda2_;
  double smoothness_;
  double strong_convexity_;
};

/// Smooth oracle of finite-sum shape (1/n) sum_i f_i + ridge, exposing
/// mini-batch gradients for the stochastic solvers.
class FiniteSumOracle : public SmoothOracle {
 public:
  virtual Index sample_count() const = 0;
  /// Mean gradient over the given sample rows, plus any ridge term.
  virtual Vector batch_gradient(const Vector& x,
                                const std::vector<int>& rows) const = 0;
  /// Mean per-sample loss over the whole dataset, without the ridge term.
  virtual double data_fit(const Vector& x) const = 0;
};

/// Multinomial softmax cross-entropy over a weight matrix W (d x C), handled
/// as a column-major flattened vector of length d*C so that every solver sees
/// a plain vector variable:
///   f(w) = (1/n) sum_i ce(W, x_i, y_i) + 0.5*lambda2*||W||_F^2.
class SoftmaxLoss : public FiniteSumOracle {
 public:
  SoftmaxLoss(Matrix X, IntVector y, int classes, double lambda2);

  double evaluate(const Vector& w) const override;
  Vector gradient(const Vector& w) const override;
  Index dimension() const override { return X_.cols() * classes_; }
  double smoothness() const override { return smoothness_; }
  double strong_convexity() const override { return lambda2_; }

  int classes() const { return classes_; }
  Index features() const { return X_.cols(); }
  Index sample_count() const override { return X_.rows(); }
  double ridge() const { return lambda2_; }
  const Matrix& features_matrix() const { return X_; }
  const IntVector& labels() const { return y_; }

  /// Mean cross-entropy over the given sample rows, without the ridge term.
  double data_fit(const Vector& w, const std::vector<int>& rows) const;
  double data_fit(const Vector& w) const override;

  Vector batch_gradient(const Vector& w,
                        const std::vector<int>& rows) const override;

  /// Fraction of rows whose argmax score matches the label.
  double accuracy(const Vector& w, const std::vector<int>& rows) const;

 private:
  Matrix class_scores(const Vector& w, const Matrix& X) const;

  Matrix X_;
  IntVector y_;
  int classes_;
  double lambda2_;
  double smoothness_;
};

}  // namespace proxnag

#endif  // PROXNAG_SMOOTH_HPP
