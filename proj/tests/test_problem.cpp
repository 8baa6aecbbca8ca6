#include "proxnag/problem.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <memory>

using namespace proxnag;

namespace {

CompositeProblem quadratic_1d(double lambda1 = 0.0) {
  auto f = std::make_shared<LeastSquaresRidge>(Matrix::Identity(1, 1),
                                               Vector::Zero(1), 0.0);
  std::shared_ptr<const Regularizer> r;
  if (lambda1 > 0.0)
    r = std::make_shared<L1Penalty>(lambda1);
  else
    r = std::make_shared<ZeroRegularizer>();
  return CompositeProblem(f, r);
}

}  // namespace

TEST_CASE("composite value") {
  SUBCASE("smooth part only") {
    auto f = std::make_shared<LeastSquaresRidge>(Matrix::Identity(2, 2),
                                                 Vector::Zero(2), 0.0);
    CompositeProblem p(f, std::make_shared<ZeroRegularizer>());
    Vector x = Vector::Ones(2);
    CHECK(composite_value(p, x).value == doctest::Approx(1.0));
    CHECK_FALSE(composite_value(p, x).infinite);
  }
  SUBCASE("with an l1 penalty") {
    auto f = std::make_shared<LeastSquaresRidge>(Matrix::Identity(2, 2),
                                                 Vector::Zero(2), 0.0);
    CompositeProblem p(f, std::make_shared<L1Penalty>(1.0));
    CHECK(composite_value(p, Vector::Ones(2)).value == doctest::Approx(3.0));
  }
  SUBCASE("matches elementwise brute force on a random instance") {
    std::mt19937_64 rng(31);
    Matrix A = testutil::random_matrix(5, 3, rng);
    Vector b = testutil::random_vector(5, rng);
    const double lambda1 = 0.4, lambda2 = 0.25;
    CompositeProblem p(std::make_shared<LeastSquaresRidge>(A, b, lambda2),
                       std::make_shared<L1Penalty>(lambda1));
    Vector x = testutil::random_vector(3, rng);
    double direct = 0.0;
    for (Index i = 0; i < 5; ++i) {
      double row = -b[i];
      for (Index j = 0; j < 3; ++j) row += A(i, j) * x[j];
      direct += 0.5 * row * row;
    }
    for (Index j = 0; j < 3; ++j)
      direct += 0.5 * lambda2 * x[j] * x[j] + lambda1 * std::abs(x[j]);
    CHECK(composite_value(p, x).value == doctest::Approx(direct).epsilon(1e-12));
  }
  SUBCASE("infeasible box point is infinite") {
    auto f = std::make_shared<LeastSquaresRidge>(Matrix::Identity(2, 2),
                                                 Vector::Zero(2), 0.0);
    CompositeProblem p(f, std::make_shared<BoxIndicator>(Vector::Zero(2),
                                                         Vector::Ones(2)));
    CHECK(composite_value(p, Vector::Constant(2, 2.0)).infinite);
    CHECK(composite_value(p, Vector::Constant(2, 0.5)).value ==
          doctest::Approx(0.25));
  }
  SUBCASE("dimension mismatch") {
    CompositeProblem p = quadratic_1d();
    CHECK_THROWS_AS(composite_value(p, Vector::Zero(2)), InputError);
  }
}

TEST_CASE("optimality residual") {
  CompositeProblem p = quadratic_1d();

  SUBCASE("zero at the minimizer") {
    CHECK(optimality_residual(p, Vector::Zero(1)) == doctest::Approx(0.0));
  }
  SUBCASE("unit residual one step away") {
    // L = 1: |1 - (1 - 1*1)| = 1
    CHECK(optimality_residual(p, Vector::Ones(1)) == doctest::Approx(1.0));
  }
  SUBCASE("soft-threshold fixed point") {
    CompositeProblem lasso = quadratic_1d(1.0);
    CHECK(optimality_residual(lasso, Vector::Zero(1)) == doctest::Approx(0.0));
  }
}
