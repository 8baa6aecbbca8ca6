#include "proxnag/problems.hpp"

#include "proxnag/solvers.hpp"
#include "proxnag/stochastic.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>

using namespace proxnag;

TEST_CASE("elastic net generator") {
  SUBCASE("hard variant hits the requested condition number") {
    ElasticNetInstance inst =
        gen_elastic_net(200, 100, "hard", 1e3, -1.0, 0.1, 1);
    Eigen::JacobiSVD<Matrix> svd(inst.A);
    const double cond = svd.singularValues().maxCoeff() /
                        svd.singularValues().minCoeff();
    CHECK(cond >= 950.0);
    CHECK(cond <= 1050.0);
  }
  SUBCASE("same seed reproduces the instance bitwise") {
    ElasticNetInstance a = gen_elastic_net(30, 20, "easy", 0.0, -1.0, 0.2, 42);
    ElasticNetInstance b = gen_elastic_net(30, 20, "easy", 0.0, -1.0, 0.2, 42);
    CHECK(a.A == b.A);
    CHECK(a.b == b.b);
    CHECK(a.lambda1 == b.lambda1);
    ElasticNetInstance c = gen_elastic_net(30, 20, "easy", 0.0, -1.0, 0.2, 43);
    CHECK(a.A != c.A);
  }
  SUBCASE("scalar instance") {
    ElasticNetInstance inst = gen_elastic_net(1, 1, "easy", 0.0, 0.5, 0.1, 7);
    CHECK(inst.A.rows() == 1);
    CompositeProblem p = inst.make_problem();
    ReferenceSolution ref = compute_reference(p);
    // 1-D elastic net solved by hand: minimize 0.5(a x - b)^2 + 0.05 x^2 + 0.5|x|
    const double a = inst.A(0, 0), b = inst.b[0];
    const double corr = a * b;
    const double denom = a * a + 0.1;
    double expected = 0.0;
    if (corr > 0.5) expected = (corr - 0.5) / denom;
    if (corr < -0.5) expected = (corr + 0.5) / denom;
    CHECK(ref.x_star[0] == doctest::Approx(expected).epsilon(1e-9));
  }
  SUBCASE("invalid sizes and variants") {
    CHECK_THROWS_AS(gen_elastic_net(0, 3, "easy", 0.0, 0.1, 0.1, 1), InputError);
    CHECK_THROWS_AS(gen_elastic_net(3, 3, "medium", 0.0, 0.1, 0.1, 1),
                    InputError);
    CHECK_THROWS_AS(gen_elastic_net(3, 3, "hard", 0.5, 0.1, 0.1, 1), InputError);
  }
}

TEST_CASE("group lasso generator") {
  SUBCASE("default shape: 20 groups of 10 with 8 planted") {
    GroupLassoInstance inst =
        gen_group_lasso(100, 200, 8, 10, -1.0, 0.1, "easy", 0.0, 3);
    CHECK(inst.partition().group_count() == 20);
    CHECK(inst.planted_groups.size() == 8);
    ActiveGroups truth = active_groups(inst.x_true, inst.partition());
    CHECK(truth.count == 8);
    CHECK(truth.indices == inst.planted_groups);
  }
  SUBCASE("seed determinism") {
    GroupLassoInstance a =
        gen_group_lasso(40, 60, 3, 10, -1.0, 0.1, "easy", 0.0, 11);
    GroupLassoInstance b =
        gen_group_lasso(40, 60, 3, 10, -1.0, 0.1, "easy", 0.0, 11);
    CHECK(a.A == b.A);
    CHECK(a.b == b.b);
    CHECK(a.planted_groups == b.planted_groups);
  }
  SUBCASE("dimension must divide into groups") {
    CHECK_THROWS_AS(gen_group_lasso(10, 25, 2, 10, 0.1, 0.1, "easy", 0.0, 1),
                    InputError);
  }
}

TEST_CASE("classification generator") {
  SUBCASE("split sizes and disjointness") {
    ClassificationInstance inst = gen_classification(1000, 10, 3, 1.0, 5);
    SplitIndices split = split_indices(inst);
    CHECK(split.train.size() == 800);
    CHECK(split.val.size() == 100);
    CHECK(split.test.size() == 100);
    std::vector<char> seen(1000, 0);
    for (const auto& part : {split.train, split.val, split.test})
      for (int i : part) {
        CHECK_FALSE(seen[static_cast<size_t>(i)]);
        seen[static_cast<size_t>(i)] = 1;
      }
    SplitIndices again = split_indices(inst);
    CHECK(split.train == again.train);
  }
  SUBCASE("labels are balanced within one") {
    ClassificationInstance inst = gen_classification(100, 5, 3, 1.0, 9);
    int counts[3] = {0, 0, 0};
    for (Index i = 0; i < inst.y.size(); ++i) ++counts[inst.y[i]];
    CHECK(std::abs(counts[0] - counts[1]) <= 1);
    CHECK(std::abs(counts[1] - counts[2]) <= 1);
  }
  SUBCASE("zero separation means chance-level accuracy") {
    ClassificationInstance inst = gen_classification(1000, 8, 4, 0.0, 13);
    SplitIndices split = split_indices(inst);
    auto loss = std::make_shared<SoftmaxLoss>(inst.X, inst.y, 4, 1e-3);
    CompositeProblem p(loss, std::make_shared<L1Penalty>(1e-4));
    StochasticOptions opts;
    opts.eta = 0.5 / loss->smoothness();
    opts.batch_size = 50;
    opts.epochs = 5;
    ProxSGDRun run = prox_sgd_run(p, Vector::Zero(p.dimension), opts);
    const double acc = loss->accuracy(run.x, split.test);
    CHECK(acc >= 0.25 - 0.15);
    CHECK(acc <= 0.25 + 0.15);
  }
  SUBCASE("two separated classes are nearly linearly separable") {
    ClassificationInstance inst = gen_classification(600, 6, 2, 4.0, 17);
    SplitIndices split = split_indices(inst);
    Matrix X_train(split.train.size(), inst.X.cols());
    IntVector y_train(split.train.size());
    for (size_t i = 0; i < split.train.size(); ++i) {
      X_train.row(static_cast<Index>(i)) = inst.X.row(split.train[i]);
      y_train[static_cast<Index>(i)] = inst.y[split.train[i]];
    }
    auto train_loss = std::make_shared<SoftmaxLoss>(X_train, y_train, 2, 1e-3);
    auto full_loss = std::make_shared<SoftmaxLoss>(inst.X, inst.y, 2, 1e-3);
    CompositeProblem p(train_loss, std::make_shared<L1Penalty>(1e-4));
    StochasticOptions opts;
    opts.eta = 1.0 / train_loss->smoothness();
    opts.batch_size = 32;
    opts.epochs = 20;
    ProxSGDRun run = prox_sgd_run(p, Vector::Zero(p.dimension), opts);
    CHECK(full_loss->accuracy(run.x, split.test) >= 0.95);
  }
}

TEST_CASE("reference solver") {
  SUBCASE("analytic 1-D minimizers") {
    CompositeProblem smooth(
        std::make_shared<LeastSquaresRidge>(Matrix::Identity(1, 1),
                                            Vector::Constant(1, 2.0), 0.0),
        std::make_shared<ZeroRegularizer>());
    ReferenceSolution ref = compute_reference(smooth);
    CHECK(ref.x_star[0] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(ref.F_star == doctest::Approx(0.0));

    CompositeProblem lasso(
        std::make_shared<LeastSquaresRidge>(Matrix::Identity(1, 1),
                                            Vector::Zero(1), 0.0),
        std::make_shared<L1Penalty>(1.0));
    ReferenceSolution lref = compute_reference(lasso);
    CHECK(lref.x_star[0] == 0.0);
    CHECK(lref.F_star == 0.0);
    // brute-force 1-D scan of 0.5 x^2 + |x| confirms the minimizer at zero
    double best = 1e300, best_x = -1.0;
    for (int i = 0; i <= 4000; ++i) {
      const double x = -2.0 + i * 1e-3;
      const double value = 0.5 * x * x + std::abs(x);
      if (value < best) {
        best = value;
        best_x = x;
      }
    }
    CHECK(best_x == doctest::Approx(0.0).epsilon(1e-6));
  }
  SUBCASE("residual bound holds on generated instances") {
    ElasticNetInstance en = gen_elastic_net(40, 25, "easy", 0.0, -1.0, 0.2, 21);
    CompositeProblem pe = en.make_problem();
    ReferenceSolution re = compute_reference(pe);
    CHECK(re.residual <= 1e-12);
    CHECK(optimality_residual(pe, re.x_star) <= 1e-10);

    GroupLassoInstance gl =
        gen_group_lasso(60, 40, 2, 10, -1.0, 0.2, "easy", 0.0, 22);
    CompositeProblem pg = gl.make_problem();
    ReferenceSolution rg = compute_reference(pg);
    CHECK(rg.residual <= 1e-12);
  }
  SUBCASE("reference determinism") {
    ElasticNetInstance en = gen_elastic_net(30, 15, "easy", 0.0, -1.0, 0.3, 33);
    CompositeProblem p = en.make_problem();
    CHECK(compute_reference(p).F_star == compute_reference(p).F_star);
  }
  SUBCASE("iteration cap failure carries the best residual") {
    ElasticNetInstance en = gen_elastic_net(30, 15, "easy", 0.0, -1.0, 0.3, 34);
    CompositeProblem p = en.make_problem();
    CHECK_THROWS_AS(compute_reference(p, 1e-12, 2), ReferenceFailure);
    try {
      compute_reference(p, 1e-12, 2);
    } catch (const ReferenceFailure& e) {
      CHECK(e.best_residual > 1e-12);
    }
  }
}

TEST_CASE("support statistics") {
  SUBCASE("active groups") {
    GroupPartition part = GroupPartition::contiguous(6, 2);
    CHECK(active_groups(Vector::Zero(6), part).count == 0);
    Vector x = Vector::Zero(6);
    x[2] = 1e-3;
    ActiveGroups act = active_groups(x, part);
    CHECK(act.count == 1);
    CHECK(act.indices == std::vector<Index>{1});
  }
  SUBCASE("sparsity fractions") {
    CHECK(sparsity(Vector::Zero(4)) == 1.0);
    CHECK(sparsity(Vector::Ones(4)) == 0.0);
    Vector x(4);
    x << 1.0, 0.0, 0.0, 2.0;
    CHECK(sparsity(x) == doctest::Approx(0.5));
  }
}
