#include "proxnag/problems.hpp"

#include "proxnag/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace proxnag {

namespace {

Matrix gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

Matrix random_orthonormal(Index rows, Index cols, std::mt19937_64& rng) {
  Matrix g = gaussian_matrix(rows, rows, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  return q.leftCols(cols);
}

/// A = U diag(s) V^T with s geometrically spaced from 1 to 1/cond_target.
Matrix conditioned_matrix(Index n, Index d, double cond_target,
                          std::mt19937_64& rng) {
  const Index r = std::min(n, d);
  Matrix U = random_orthonormal(n, r, rng);
  Matrix V = random_orthonormal(d, r, rng);
  Vector s(r);
  if (r == 1) {
    s[0] = 1.0;
  } else {
    const double ratio = std::pow(1.0 / cond_target,
                                  1.0 / static_cast<double>(r - 1));
    double value = 1.0;
    for (Index i = 0; i < r; ++i) {
      s[i] = value;
      value *= ratio;
    }
  }
  return U * s.asDiagonal() * V.transpose();
}

Vector sparse_gaussian(Index d, Index support, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Index> idx(static_cast<size_t>(d));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  Vector x = Vector::Zero(d);
  for (Index i = 0; i < support; ++i) x[idx[static_cast<size_t>(i)]] = normal(rng);
  return x;
}

Vector noisy_observations(const Matrix& A, const Vector& x_true,
                          std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector noise(A.rows());
  for (Index i = 0; i < noise.size(); ++i) noise[i] = 0.01 * normal(rng);
  return A * x_true + noise;
}

Matrix design_matrix(Index n, Index d, const std::string& variant,
                     double cond_target, std::mt19937_64& rng) {
  if (variant == "easy") return gaussian_matrix(n, d, rng);
  if (variant == "hard") {
    if (cond_target < 1.0)
      throw InputError("generator: cond_target must be >= 1");
    return conditioned_matrix(n, d, cond_target, rng);
  }
  throw InputError("generator: variant must be easy or hard");
}

}  // namespace

CompositeProblem ElasticNetInstance::make_problem() const {
  return CompositeProblem(std::make_shared<LeastSquaresRidge>(A, b, lambda2),
                          std::make_shared<L1Penalty>(lambda1));
}

ElasticNetInstance gen_elastic_net(Index n, Index d, const std::string& variant,
                                   double cond_target, double lambda1,
                                   double lambda2, std::uint64_t seed) {
  if (n < 1 || d < 1) throw InputError("gen_elastic_net: sizes must be >= 1");
  std::mt19937_64 rng(seed);

  ElasticNetInstance instance;
  instance.variant = variant;
  instance.cond_target = variant == "hard" ? cond_target : 0.0;
  instance.seed = seed;
  instance.A = design_matrix(n, d, variant, cond_target, rng);
  instance.x_true = sparse_gaussian(d, std::max<Index>(1, d / 10), rng);
  instance.b = noisy_observations(instance.A, instance.x_true, rng);
  instance.lambda2 = lambda2;
  instance.lambda1 =
      lambda1 >= 0.0
          ? lambda1
          : 0.1 * (instance.A.transpose() * instance.b).lpNorm<Eigen::Infinity>();
  return instance;
}

GroupPartition GroupLassoInstance::partition() const {
  return GroupPartition::contiguous(A.cols(), group_size);
}

CompositeProblem GroupLassoInstance::make_problem() const {
  return CompositeProblem(
      std::make_shared<LeastSquaresRidge>(A, b, lambda2),
      std::make_shared<GroupL2Penalty>(lambda_g, partition()));
}

GroupLassoInstance gen_group_lasso(Index n, Index d, Index n_groups_active,
                                   Index group_size, double lambda_g,
                                   double lambda2, const std::string& variant,
                                   double cond_target, std::uint64_t seed) {
  if (n < 1 || d < 1) throw InputError("gen_group_lasso: sizes must be >= 1");
  if (group_size < 1 || d % group_size != 0)
    throw InputError("gen_group_lasso: d must be divisible by group_size");
  const Index n_groups = d / group_size;
  if (n_groups_active < 0 || n_groups_active > n_groups)
    throw InputError("gen_group_lasso: invalid active group count");

  std::mt19937_64 rng(seed);
  GroupLassoInstance instance;
  instance.variant = variant;
  instance.cond_target = variant == "hard" ? cond_target : 0.0;
  instance.seed = seed;
  instance.group_size = group_size;
  instance.A = design_matrix(n, d, variant, cond_target, rng);

  std::vector<Index> groups(static_cast<size_t>(n_groups));
  std::iota(groups.begin(), groups.end(), Index{0});
  std::shuffle(groups.begin(), groups.end(), rng);
  instance.planted_groups.assign(
      groups.begin(), groups.begin() + static_cast<long>(n_groups_active));
  std::sort(instance.planted_groups.begin(), instance.planted_groups.end());

  std::normal_distribution<double> normal(0.0, 1.0);
  instance.x_true = Vector::Zero(d);
  for (Index g : instance.planted_groups)
    for (Index j = 0; j < group_size; ++j)
      instance.x_true[g * group_size + j] = normal(rng);

  instance.b = noisy_observations(instance.A, instance.x_true, rng);
  instance.lambda2 = lambda2;
  if (lambda_g >= 0.0) {
    instance.lambda_g = lambda_g;
  } else {
    const Vector corr = instance.A.transpose() * instance.b;
    double best = 0.0;
    for (Index g = 0; g < n_groups; ++g)
      best = std::max(best,
                      corr.segment(g * group_size, group_size).norm());
    instance.lambda_g = 0.1 * best;
  }
  return instance;
}

ClassificationInstance gen_classification(Index n, Index d, int classes,
                                          double separation,
                                          std::uint64_t seed) {
  if (classes < 2) throw InputError("gen_classification: need >= 2 classes");
  if (n < classes || d < 1) throw InputError("gen_classification: bad sizes");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Matrix means(classes, d);
  for (int c = 0; c < classes; ++c) {
    Vector direction(d);
    for (Index j = 0; j < d; ++j) direction[j] = normal(rng);
    direction.normalize();
    means.row(c) = separation * direction.transpose();
  }

  // Balanced labels (counts differ by at most one) in shuffled row order.
  std::vector<int> labels(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i)
    labels[static_cast<size_t>(i)] = static_cast<int>(i % classes);
  std::shuffle(labels.begin(), labels.end(), rng);

  ClassificationInstance instance;
  instance.classes = classes;
  instance.seed = seed;
  instance.X.resize(n, d);
  instance.y.resize(n);
  for (Index i = 0; i < n; ++i) {
    const int c = labels[static_cast<size_t>(i)];
    instance.y[i] = c;
    for (Index j = 0; j < d; ++j)
      instance.X(i, j) = means(c, j) + normal(rng);
  }
  return instance;
}

SplitIndices split_indices(const ClassificationInstance& instance) {
  const Index n = instance.X.rows();
  const double total =
      instance.train_frac + instance.val_frac + instance.test_frac;
  if (std::abs(total - 1.0) > 1e-9)
    throw InputError("split_indices: fractions must sum to 1");

  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(instance.seed ^ 0x9e3779b97f4a7c15ULL);
  std::shuffle(order.begin(), order.end(), rng);

  const auto n_train = static_cast<size_t>(
      std::llround(instance.train_frac * static_cast<double>(n)));
  const auto n_val = static_cast<size_t>(
      std::llround(instance.val_frac * static_cast<double>(n)));

  SplitIndices split;
  split.train.assign(order.begin(), order.begin() + static_cast<long>(n_train));
  split.val.assign(order.begin() + static_cast<long>(n_train),
                   order.begin() + static_cast<long>(n_train + n_val));
  split.test.assign(order.begin() + static_cast<long>(n_train + n_val),
                    order.end());
  return split;
}

ReferenceSolution compute_reference(const CompositeProblem& p,
                                    double residual_tol, long iter_cap) {
  const double L = p.f->smoothness();
  if (L <= 0.0)
    throw ConfigError("compute_reference: smoothness must be positive");
  const double eta = 1.0 / L;

  Vector x = Vector::Zero(p.dimension);
  Vector y = x;
  double t = 1.0;
  double residual = optimality_residual(p, x);
  double best_residual = residual;
  long k = 0;
  while (residual > residual_tol) {
    if (k >= iter_cap)
      throw ReferenceFailure(
          "compute_reference: iteration cap reached at residual " +
              std::to_string(best_residual),
          best_residual);
    Vector x_prev = x;
    x = ista_step(p, eta, y);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = x + ((t - 1.0) / t_next) * (x - x_prev);
    t = t_next;
    ++k;
    residual = optimality_residual(p, x);
    best_residual = std::min(best_residual, residual);
  }

  ReferenceSolution ref;
  ref.x_star = ista_step(p, eta, x);  // polish
  ref.residual = optimality_residual(p, ref.x_star);
  ref.F_star = composite_value(p, ref.x_star).as_double();
  ref.method = "fista+polish";
  return ref;
}

CompositeProblem with_reference(CompositeProblem p, ReferenceSolution ref) {
  p.reference = std::move(ref);
  return p;
}

ActiveGroups active_groups(const Vector& x, const GroupPartition& partition,
                           double threshold) {
  require_dimension(x, partition.dimension(), "active_groups");
  ActiveGroups result;
  for (Index g = 0; g < partition.group_count(); ++g) {
    double sq = 0.0;
    for (Index i : partition.groups()[static_cast<size_t>(g)]) sq += x[i] * x[i];
    if (std::sqrt(sq) > threshold) {
      ++result.count;
      result.indices.push_back(g);
    }
  }
  return result;
}

double sparsity(const Vector& x, double threshold) {
  if (x.size() == 0) return 0.0;
  const auto zeros = (x.array().abs() <= threshold).count();
  return static_cast<double>(zeros) / static_cast<double>(x.size());
}

}  // namespace proxnag
