#include "proxnag/prox.hpp"

#include "proxnag/regularizers.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>

using namespace proxnag;

namespace {

/// 1-D brute-force minimizer of r(u) + (u-z)^2/(2 tau) on a fine grid,
/// independent of the closed forms under test.
double scan_1d(const Regularizer& r, double tau, double z, double half_width,
               int points = 400001) {
  double best_u = z - half_width;
  double best_val = std::numeric_limits<double>::infinity();
  const double step = 2.0 * half_width / (points - 1);
  Vector u(1);
  for (int i = 0; i < points; ++i) {
    u[0] = z - half_width + step * i;
    const ExtendedValue rv = r.evaluate(u);
    if (rv.infinite) continue;
    const double val = rv.value + (u[0] - z) * (u[0] - z) / (2.0 * tau);
    if (val < best_val) {
      best_val = val;
      best_u = u[0];
    }
  }
  return best_u;
}

}  // namespace

TEST_CASE("soft thresholding") {
  SUBCASE("componentwise shrinkage") {
    Vector z(3);
    z << 3.0, -0.5, 0.0;
    Vector out = prox_l1(1.0, 1.0, z);
    CHECK(out[0] == doctest::Approx(2.0));
    CHECK(out[1] == 0.0);
    CHECK(out[2] == 0.0);
    // cross-check coordinate 0 against the 1-D scan oracle
    L1Penalty r(1.0);
    CHECK(scan_1d(r, 1.0, 3.0, 8.0) == doctest::Approx(2.0).epsilon(1e-4));
  }
  SUBCASE("zero weight is the identity") {
    Vector z(4);
    z << 1.0, -2.0, 0.5, 7.0;
    CHECK((prox_l1(0.0, 3.0, z) - z).norm() == 0.0);
  }
  SUBCASE("zero input stays zero") {
    CHECK(prox_l1(1.0, 2.0, Vector::Zero(5)).norm() == 0.0);
  }
}

TEST_CASE("group shrinkage") {
  GroupPartition single = GroupPartition::contiguous(2, 2);

  SUBCASE("interior shrinkage") {
    Vector z(2);
    z << 3.0, 4.0;
    Vector out = prox_group_l2(1.0, single, 1.0, z);  // ||z|| = 5, factor 0.8
    CHECK(out[0] == doctest::Approx(2.4).epsilon(1e-12));
    CHECK(out[1] == doctest::Approx(3.2).epsilon(1e-12));
    // 2-D grid oracle cross-check
    GroupL2Penalty r(1.0, single);
    CHECK(prox_oracle_check(r, 1.0, z));
  }
  SUBCASE("block collapses at and beyond the threshold") {
    Vector z(2);
    z << 3.0, 4.0;
    // ||z_G|| == tau*lambda_g exactly: the (.)_+ factor is zero
    CHECK(prox_group_l2(5.0, single, 1.0, z).norm() == 0.0);
    CHECK(prox_group_l2(6.0, single, 1.0, z).norm() == 0.0);
    CHECK(prox_group_l2(1.0, single, 5.0, z).norm() == 0.0);
  }
  SUBCASE("zero block stays zero") {
    CHECK(prox_group_l2(1.0, single, 1.0, Vector::Zero(2)).norm() == 0.0);
  }
  SUBCASE("block permutation equivariance") {
    std::mt19937_64 rng(5);
    GroupPartition part = GroupPartition::contiguous(6, 2);
    // same blocks listed in a different order must give the same result
    std::vector<std::vector<Index>> reordered = {{4, 5}, {0, 1}, {2, 3}};
    GroupPartition permuted(reordered, 6);
    for (int trial = 0; trial < 25; ++trial) {
      Vector z = testutil::random_vector(6, rng, 2.0);
      CHECK((prox_group_l2(0.7, part, 0.9, z) -
             prox_group_l2(0.7, permuted, 0.9, z))
                .norm() == 0.0);
    }
  }
}

TEST_CASE("box projection") {
  Vector lower = Vector::Zero(3);
  Vector upper = Vector::Ones(3);
  Vector z(3);
  z << -1.0, 0.5, 2.0;

  SUBCASE("clamp") {
    Vector out = prox_box(lower, upper, 1.0, z);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.5);
    CHECK(out[2] == 1.0);
  }
  SUBCASE("interior points are fixed") {
    Vector inside(3);
    inside << 0.2, 0.9, 0.0;
    CHECK((prox_box(lower, upper, 1.0, inside) - inside).norm() == 0.0);
  }
  SUBCASE("independent of the prox scale") {
    CHECK((prox_box(lower, upper, 10.0, z) - prox_box(lower, upper, 0.1, z))
              .norm() == 0.0);
  }
  SUBCASE("inconsistent bounds") {
    CHECK_THROWS_AS(prox_box(upper, lower, 1.0, z), InputError);
    CHECK_THROWS_AS(BoxIndicator(upper, lower), InputError);
  }
}

TEST_CASE("grid oracle validates the closed forms") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> dim_dist(1, 3);
  std::uniform_real_distribution<double> tau_dist(0.2, 2.0);

  auto run_checks = [&](auto make_reg, int count) {
    for (int trial = 0; trial < count; ++trial) {
      const Index d = dim_dist(rng);
      auto reg = make_reg(d);
      const double tau = tau_dist(rng);
      Vector z = testutil::random_vector(d, rng, 2.0);
      const int res = d == 3 ? 101 : 401;
      CHECK(prox_oracle_check(*reg, tau, z, res));
    }
  };

  run_checks(
      [](Index) { return std::make_unique<L1Penalty>(0.8); }, 12);
  run_checks(
      [](Index d) {
        return std::make_unique<GroupL2Penalty>(
            0.6, GroupPartition::contiguous(d, d));
      },
      12);
  run_checks(
      [](Index d) {
        return std::make_unique<BoxIndicator>(Vector::Constant(d, -0.5),
                                              Vector::Constant(d, 1.5));
      },
      12);
}

TEST_CASE("perturbed prox output fails the oracle") {
  L1Penalty r(1.0);
  Vector z(1);
  z << 3.0;
  CHECK(prox_oracle_check(r, 1.0, z));
  Vector bad = r.prox(1.0, z);
  bad[0] += 0.1;
  CHECK_FALSE(prox_candidate_check(r, 1.0, z, bad));
}

TEST_CASE("oracle rejects dimensions above three") {
  L1Penalty r(1.0);
  CHECK_THROWS_AS(prox_oracle_check(r, 1.0, Vector::Zero(4)), InputError);
}

TEST_CASE("nonexpansiveness and objective decrease") {
  std::mt19937_64 rng(29);
  const Index d = 12;
  GroupPartition part = GroupPartition::contiguous(d, 3);
  L1Penalty l1(0.7);
  GroupL2Penalty group(0.5, part);
  BoxIndicator box(Vector::Constant(d, -1.0), Vector::Constant(d, 1.0));

  const Regularizer* regs[] = {&l1, &group, &box};
  for (const Regularizer* r : regs) {
    for (int trial = 0; trial < 1000; ++trial) {
      Vector z1 = testutil::random_vector(d, rng, 3.0);
      Vector z2 = testutil::random_vector(d, rng, 3.0);
      const double tau = 0.8;
      CHECK((r->prox(tau, z1) - r->prox(tau, z2)).norm() <=
            (z1 - z2).norm() + 1e-12);
    }
    for (int trial = 0; trial < 50; ++trial) {
      Vector z = testutil::random_vector(d, rng, 0.9);  // keep z feasible
      const double tau = 1.3;
      Vector u = r->prox(tau, z);
      const double lhs =
          r->evaluate(u).as_double() + (u - z).squaredNorm() / (2.0 * tau);
      CHECK(lhs <= r->evaluate(z).as_double() + 1e-12);
    }
  }
}

TEST_CASE("group partition validation") {
  CHECK_THROWS_AS(GroupPartition::contiguous(10, 3), InputError);
  CHECK_THROWS_AS(GroupPartition({{0, 1}, {1, 2}}, 3), InputError);
  CHECK_THROWS_AS(GroupPartition({{0, 1}}, 3), InputError);
  GroupPartition rows = GroupPartition::matrix_rows(3, 2);
  CHECK(rows.group_count() == 3);
  CHECK(rows.groups()[1] == std::vector<Index>{1, 4});
}
