#include "proxnag/smooth.hpp"

#include <cmath>

namespace proxnag {

double estimate_smoothness(const Matrix& A, double lambda2, int iters,
                           double tol) {
  if (iters < 1) throw InputError("estimate_smoothness: iters must be >= 1");
  const Index d = A.cols();
  if (d == 0 || A.rows() == 0) return lambda2;

  Vector q = Vector::Ones(d);
  q.normalize();
  double eig = 0.0;
  for (int it = 0; it < iters; ++it) {
    Vector y = A.transpose() * (A * q);
    const double norm = y.norm();
    if (norm == 0.0) {
      eig = 0.0;
      break;
    }
    const double next = q.dot(y);  // Rayleigh quotient, q is unit
    q = y / norm;
    if (std::abs(next - eig) <= tol * std::max(1.0, std::abs(next))) {
      eig = next;
      break;
    }
    eig = next;
  }
  return eig + lambda2;
}

double smallest_gram_eigenvalue(const Matrix& A) {
  if (A.rows() < A.cols()) return 0.0;
  if (A.cols() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(A.transpose() * A,
                                           Eigen::EigenvaluesOnly);
  return std::max(0.0, es.eigenvalues().minCoeff());
}

LeastSquaresRidge::LeastSquaresRidge(Matrix A, Vector b, double lambda2)
    : A_(std::move(A)), b_(std::move(b)), lambda2_(lambda2) {
  if (A_.rows() != b_.size())
    throw InputError("LeastSquaresRidge: row count of A must match b");
  if (lambda2_ < 0.0)
    throw InputError("LeastSquaresRidge: ridge weight must be nonnegative");
  smoothness_ = estimate_smoothness(A_, lambda2_);
  strong_convexity_ = smallest_gram_eigenvalue(A_) + lambda2_;
}

double LeastSquaresRidge::evaluate(const Vector& x) const {
  require_dimension(x, dimension(), "LeastSquaresRidge::evaluate");
  const double residual = (A_ * x - b_).squaredNorm();
  return 0.5 * residual + 0.5 * lambda2_ * x.squaredNorm();
}

Vector LeastSquaresRidge::gradient(const Vector& x) const {
  require_dimension(x, dimension(), "LeastSquaresRidge::gradient");
  return A_.transpose() * (A_ * x - b_) + lambda2_ * x;
}

SoftmaxLoss::SoftmaxLoss(Matrix X, IntVector y, int classes, double lambda2)
    : X_(std::move(X)), y_(std::move(y)), classes_(classes), lambda2_(lambda2) {
  if (classes_ < 2) throw InputError("SoftmaxLoss: need at least two classes");
  if (X_.rows() != y_.size())
    throw InputError("SoftmaxLoss: row count of X must match labels");
  if (lambda2_ < 0.0)
    throw InputError("SoftmaxLoss: ridge weight must be nonnegative");
  for (Index i = 0; i < y_.size(); ++i)
    if (y_[i] < 0 || y_[i] >= classes_)
      throw InputError("SoftmaxLoss: label out of range at row " +
                       std::to_string(i));
  // The per-sample Hessian is bounded by 0.5 * x x^T in the class block
  // structure, which gives L <= 0.5 * lambda_max(X^T X) / n + lambda2.
  const double n = static_cast<double>(X_.rows());
  smoothness_ =
      n > 0 ? 0.5 * estimate_smoothness(X_, 0.0) / n + lambda2_ : lambda2_;
}

Matrix SoftmaxLoss::class_scores(const Vector& w, const Matrix& X) const {
  Eigen::Map<const Matrix> W(w.data(), X_.cols(), classes_);
  return X * W;  // n x C
}

double SoftmaxLoss::data_fit(const Vector& w, const std::vector<int>& rows) const {
  require_dimension(w, dimension(), "SoftmaxLoss::data_fit");
  Eigen::Map<const Matrix> W(w.data(), X_.cols(), classes_);
  double total = 0.0;
  for (int i : rows) {
    Eigen::RowVectorXd scores = X_.row(i) * W;
    const double m = scores.maxCoeff();
    const double lse = m + std::log((scores.array() - m).exp().sum());
    total += lse - scores[y_[i]];
  }
  return total / static_cast<double>(rows.size());
}

double SoftmaxLoss::data_fit(const Vector& w) const {
  require_dimension(w, dimension(), "SoftmaxLoss::data_fit");
  Matrix scores = class_scores(w, X_);
  Vector rowmax = scores.rowwise().maxCoeff();
  Vector lse =
      ((scores.colwise() - rowmax).array().exp().rowwise().sum()).log().matrix() +
      rowmax;
  double total = 0.0;
  for (Index i = 0; i < X_.rows(); ++i) total += lse[i] - scores(i, y_[i]);
  return total / static_cast<double>(X_.rows());
}

double SoftmaxLoss::evaluate(const Vector& w) const {
  return data_fit(w) + 0.5 * lambda2_ * w.squaredNorm();
}

Vector SoftmaxLoss::gradient(const Vector& w) const {
  require_dimension(w, dimension(), "SoftmaxLoss::gradient");
  Matrix scores = class_scores(w, X_);
  Vector rowmax = scores.rowwise().maxCoeff();
  Matrix P = (scores.colwise() - rowmax).array().exp().matrix();
  Vector rowsum = P.rowwise().sum();
  P.array().colwise() /= rowsum.array();
  for (Index i = 0; i < X_.rows(); ++i) P(i, y_[i]) -= 1.0;
  Matrix G = X_.transpose() * P / static_cast<double>(X_.rows());
  Vector g = Eigen::Map<Vector>(G.data(), G.size());
  return g + lambda2_ * w;
}

Vector SoftmaxLoss::batch_gradient(const Vector& w,
                                   const std::vector<int>& rows) const {
  require_dimension(w, dimension(), "SoftmaxLoss::batch_gradient");
  if (rows.empty()) throw InputError("SoftmaxLoss::batch_gradient: empty batch");
  Eigen::Map<const Matrix> W(w.data(), X_.cols(), classes_);
  Matrix G = Matrix::Zero(X_.cols(), classes_);
  for (int i : rows) {
    Eigen::RowVectorXd scores = X_.row(i) * W;
    const double m = scores.maxCoeff();
    Eigen::RowVectorXd p = (scores.array() - m).exp();
    p /= p.sum();
    p[y_[i]] -= 1.0;
    G.noalias() += X_.row(i).transpose() * p;
  }
  G /= static_cast<double>(rows.size());
  Vector g = Eigen::Map<Vector>(G.data(), G.size());
  return g + lambda2_ * w;
}

double SoftmaxLoss::accuracy(const Vector& w, const std::vector<int>& rows) const {
  require_dimension(w, dimension(), "SoftmaxLoss::accuracy");
  if (rows.empty()) return 0.0;
  Eigen::Map<const Matrix> W(w.data(), X_.cols(), classes_);
  int hits = 0;
  for (int i : rows) {
    Eigen::RowVectorXd scores = X_.row(i) * W;
    Index best = 0;
    scores.maxCoeff(&best);
    if (static_cast<int>(best) == y_[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(rows.size());
}

}  // namespace proxnag
