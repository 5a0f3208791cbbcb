#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "geomix/error.hpp"
#include "geomix/spd.hpp"

namespace geomix {
namespace {

using Eigen::MatrixXd;

MatrixXd diag2(double a, double b) {
  MatrixXd m = MatrixXd::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

MatrixXd eye2(double s = 1.0) { return s * MatrixXd::Identity(2, 2); }

TEST(MatrixPower, Examples) {
  Philox rng(2);
  const auto a = spd::to_matrix(testing::random_point(SpaceKind::spd(3), rng));
  EXPECT_LT((spd::matrix_power(a, 1.0) - a).norm(), 1e-12 * a.norm());
  EXPECT_LT((spd::matrix_power(eye2(4), 0.5) - eye2(2)).norm(), 1e-14);
  EXPECT_LT((spd::matrix_power(diag2(9, 1), 0.5) - diag2(3, 1)).norm(), 1e-14);
}

TEST(MatrixPower, SquareRootSquaresBack) {
  Philox rng(4);
  for (int rep = 0; rep < 20; ++rep) {
    const auto a = spd::to_matrix(testing::random_point(SpaceKind::spd(4), rng));
    const MatrixXd r = spd::matrix_power(a, 0.5);
    EXPECT_LT((r * r - a).norm(), 1e-10 * a.norm());
  }
}

TEST(MatrixPower, NegativeEigenvalueRejected) {
  EXPECT_THROW(spd::matrix_power(diag2(1, -0.5), 0.5), DomainError);
}

TEST(PowerDistance, Examples) {
  EXPECT_DOUBLE_EQ(spd::power_distance(eye2(4), eye2(4), 0.5), 0.0);
  // Diagonal by hand: sqrt(4) = 2, so 2 * ||2I - I||_F = 2 sqrt(2).
  EXPECT_NEAR(spd::power_distance(eye2(4), eye2(), 0.5), 2.0 * std::sqrt(2.0), 1e-14);
  // diag(3,1) - I = diag(2,0): 2 * 2 = 4.
  EXPECT_NEAR(spd::power_distance(diag2(9, 1), eye2(), 0.5), 4.0, 1e-14);
}

TEST(SpdGeodesic, Examples) {
  EXPECT_LT((spd::geodesic(eye2(4), eye2(), 0.0, 0.5) - eye2(4)).norm(), 1e-14);
  EXPECT_LT((spd::geodesic(eye2(4), eye2(), 1.0, 0.5) - eye2()).norm(), 1e-14);
  EXPECT_LT((spd::geodesic(eye2(4), eye2(), 0.5, 0.5) - eye2(2.25)).norm(), 1e-14);
}

TEST(SpdGeodesic, LeavingTheConeRejected) {
  EXPECT_THROW(spd::geodesic(eye2(4), eye2(), 3.0, 0.5), DomainError);
}

TEST(SpdMean, Examples) {
  const auto kind = SpaceKind::spd(2, 0.5);
  const std::vector<ObjectPoint> one{spd::from_matrix(kind, eye2(4))};
  EXPECT_LT((spd::to_matrix(spd::weighted_mean(one, std::vector<double>{1}).point) - eye2(4)).norm(),
            1e-14);

  const std::vector<MatrixXd> ab{eye2(4), eye2()};
  const auto m = spd::weighted_mean(ab, std::vector<double>{1, 1}, 0.5);
  EXPECT_FALSE(m.clipped);
  EXPECT_LT((m.mean - eye2(2.25)).norm(), 1e-14);
}

TEST(SpdMean, ClipsAtEigenvalueFloor) {
  const std::vector<MatrixXd> ab{eye2(), eye2(4)};
  const auto m = spd::weighted_mean(ab, std::vector<double>{2, -1}, 0.5);
  EXPECT_TRUE(m.clipped);
  EXPECT_LT((m.mean - eye2(spd::kEigFloor * spd::kEigFloor)).norm(), 1e-30);

  const auto kind = SpaceKind::spd(2, 0.5);
  const std::vector<ObjectPoint> pts{spd::from_matrix(kind, eye2()), spd::from_matrix(kind, eye2(4))};
  EXPECT_TRUE(spd::weighted_mean(pts, std::vector<double>{2, -1}).info.projected);
}

TEST(SpdMean, MinimisesObjectiveAgainstPerturbations) {
  Philox rng(8);
  const auto kind = SpaceKind::spd(3, 0.5);
  std::vector<ObjectPoint> pts;
  for (int j = 0; j < 4; ++j) pts.push_back(testing::random_point(kind, rng));
  const std::vector<double> w{1.5, 0.5, 1.0, 0.25};
  const auto mu = spd::weighted_mean(pts, w).point;
  auto objective = [&](const ObjectPoint& m) {
    double f = 0.0;
    for (std::size_t j = 0; j < pts.size(); ++j) f += w[j] * std::pow(dist(m, pts[j]), 2);
    return f;
  };
  const double f0 = objective(mu);
  for (int rep = 0; rep < 20; ++rep) {
    const auto other = testing::random_neighbour(mu, 0.05, rng);
    EXPECT_GE(objective(other), f0 - 1e-12);
  }
}

TEST(SpdPoint, ValidityChecks) {
  const auto kind = SpaceKind::spd(2);
  EXPECT_TRUE(spd::is_valid(ObjectPoint(kind, {2, 0.5, 0.5, 1})));
  EXPECT_FALSE(spd::is_valid(ObjectPoint(kind, {2, 0.5, 0.4, 1})));  // asymmetric
  EXPECT_FALSE(spd::is_valid(ObjectPoint(kind, {1, 2, 2, 1})));      // indefinite
}

}  // namespace
}  // namespace geomix
