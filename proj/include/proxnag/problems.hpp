#ifndef PROXNAG_PROBLEMS_HPP
#define PROXNAG_PROBLEMS_HPP

#include "proxnag/problem.hpp"
#include "proxnag/regularizers.hpp"
#include "proxnag/smooth.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace proxnag {

/// Raised when the reference solve hits the iteration cap before reaching
/// the residual tolerance.
struct ReferenceFailure : std::runtime_error {
  ReferenceFailure(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual(best_residual) {}
  double best_residual;
};

struct ElasticNetInstance {
  Matrix A;
  Vector b;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::uint64_t seed = 0;
  std::string variant;  // "easy" (Gaussian) or "hard" (conditioned)
  double cond_target = 0.0;
  Vector x_true;

  CompositeProblem make_problem() const;
};

/// easy: i.i.d. standard Gaussian A. hard: A = U diag(s) V^T with random
/// orthonormal factors and s geometrically spaced from 1 down to
/// 1/cond_target. b = A x_true + 0.01 * noise with a sparse Gaussian x_true.
/// Negative lambda1 selects the default 0.1 * ||A^T b||_inf.
ElasticNetInstance gen_elastic_net(Index n, Index d, const std::string& variant,
                                   double cond_target, double lambda1,
                                   double lambda2, std::uint64_t seed);

struct GroupLassoInstance {
  Matrix A;
  Vector b;
  double lambda2 = 0.0;
  double lambda_g = 0.0;
  Index group_size = 10;
  std::uint64_t seed = 0;
  std::string variant;
  double cond_target = 0.0;
  std::vector<Index> planted_groups;  // sorted group indices
  Vector x_true;

  GroupPartition partition() const;
  CompositeProblem make_problem() const;
};

/// Contiguous groups of group_size; x_true is nonzero exactly on
/// n_groups_active uniformly chosen groups. Negative lambda_g selects the
/// default 0.1 * max_G ||(A^T b)_G||_2.
GroupLassoInstance gen_group_lasso(Index n, Index d, Index n_groups_active,
                                   Index group_size, double lambda_g,
                                   double lambda2, const std::string& variant,
                                   double cond_target, std::uint64_t seed);

struct ClassificationInstance {
  Matrix X;
  IntVector y;
  int classes = 0;
  double train_frac = 0.8;
  double val_frac = 0.1;
  double test_frac = 0.1;
  std::uint64_t seed = 0;
};

/// Gaussian class-conditional clusters with mean separation `separation`;
/// labels balanced within one count.
ClassificationInstance gen_classification(Index n, Index d, int classes,
                                          double separation,
                                          std::uint64_t seed);

struct SplitIndices {
  std::vector<int> train, val, test;
};

/// Disjoint seeded shuffle split with sizes round(train_frac*n),
/// round(val_frac*n), and the remainder.
SplitIndices split_indices(const ClassificationInstance& instance);

/// FISTA at step 1/L until the forward-backward residual reaches
/// residual_tol, then one prox-gradient polish step. Throws ReferenceFailure
/// with the best residual when iter_cap is hit first.
ReferenceSolution compute_reference(const CompositeProblem& p,
                                    double residual_tol = 1e-12,
                                    long iter_cap = 500000);

/// p with the reference attached (gap columns become available).
CompositeProblem with_reference(CompositeProblem p, ReferenceSolution ref);

struct ActiveGroups {
  long count = 0;
  std::vector<Index> indices;
};

/// Groups whose Euclidean norm exceeds the threshold.
ActiveGroups active_groups(const Vector& x, const GroupPartition& partition,
                           double threshold = 1e-8);

/// Fraction of entries with |x_i| <= threshold.
double sparsity(const Vector& x, double threshold = 1e-8);

}  // namespace proxnag

#endif  // PROXNAG_PROBLEMS_HPP
