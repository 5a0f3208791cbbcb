#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "geomix/error.hpp"
#include "geomix/frechet_regression.hpp"

namespace geomix {
namespace {

using testing::euclid;

TEST(PredictorStats, DivisorNCovariance) {
  const std::vector<double> two{0, 1};
  const auto s2 = predictor_stats(column(two));
  EXPECT_DOUBLE_EQ(s2.mean(0), 0.5);
  EXPECT_DOUBLE_EQ(s2.cov(0, 0), 0.25);

  const std::vector<double> three{0, 0.5, 1};
  const auto s3 = predictor_stats(column(three));
  EXPECT_DOUBLE_EQ(s3.mean(0), 0.5);
  EXPECT_NEAR(s3.cov(0, 0), 1.0 / 6.0, 1e-16);
}

TEST(PredictorStats, DegenerateDesigns) {
  const std::vector<double> constant{2, 2, 2};
  EXPECT_THROW(predictor_stats(column(constant)), DegenerateDesignError);
  const std::vector<double> single{1};
  EXPECT_THROW(predictor_stats(column(single)), DegenerateDesignError);
  Eigen::MatrixXd dup(4, 2);
  dup << 0, 0, 1, 1, 2, 2, 3, 3;
  EXPECT_THROW(predictor_stats(dup), DegenerateDesignError);
}

TEST(GfrWeightsTest, Examples) {
  const std::vector<double> two{0, 1};
  const auto X2 = column(two);
  const auto s2 = predictor_stats(X2);
  const auto w = gfr_weights(s2, X2, Eigen::VectorXd::Constant(1, 0.0));
  EXPECT_NEAR(w.weights[0], 2.0, 1e-15);
  EXPECT_NEAR(w.weights[1], 0.0, 1e-15);

  const auto at_mean = gfr_weights(s2, X2, s2.mean);
  for (double v : at_mean.weights) EXPECT_DOUBLE_EQ(v, 1.0);

  const std::vector<double> three{0, 0.5, 1};
  const auto X3 = column(three);
  const auto w3 = gfr_weights(predictor_stats(X3), X3, Eigen::VectorXd::Constant(1, 1.0));
  EXPECT_NEAR(w3.weights[0], -0.5, 1e-14);
  EXPECT_NEAR(w3.weights[1], 1.0, 1e-14);
  EXPECT_NEAR(w3.weights[2], 2.5, 1e-14);
}

TEST(GfrWeightsTest, SumToSampleSizeProperty) {
  Philox rng(31);
  for (int rep = 0; rep < 100; ++rep) {
    const auto n = rng.uniform_int(3, 30);
    const auto p = rng.uniform_int(1, 3);
    if (n <= p) continue;
    Eigen::MatrixXd X(n, p);
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.normal();
    Eigen::VectorXd x0(p);
    for (Eigen::Index k = 0; k < p; ++k) x0(k) = 3 * rng.normal();
    const auto w = gfr_weights(predictor_stats(X), X, x0);
    const double sum = std::accumulate(w.weights.begin(), w.weights.end(), 0.0);
    EXPECT_NEAR(sum, static_cast<double>(n), 1e-9 * static_cast<double>(n));
  }
}

TEST(GfrFit, EuclideanExamples) {
  const std::vector<double> t2{0, 1};
  const auto X2 = column(t2);
  const std::vector<ObjectPoint> y2{euclid(0), euclid(2)};
  EXPECT_NEAR(gfr_fit(y2, gfr_weights(predictor_stats(X2), X2, Eigen::VectorXd::Constant(1, 0.0)))[0],
              0.0, 1e-15);

  const std::vector<double> t4{0, 0.3, 0.7, 1};
  const auto X4 = column(t4);
  std::vector<ObjectPoint> y4;
  for (double t : t4) y4.push_back(euclid(2 * t + 1));
  const auto stats = predictor_stats(X4);
  for (double t : {0.0, 0.2, 0.5, 1.0, 1.3})
    EXPECT_NEAR(gfr_fit(y4, gfr_weights(stats, X4, Eigen::VectorXd::Constant(1, t)))[0], 2 * t + 1,
                1e-12);
}

TEST(GfrFit, RecoversQuantileGeodesic) {
  Philox rng(37);
  const auto kind = SpaceKind::wasserstein_midpoint(40);
  for (int rep = 0; rep < 20; ++rep) {
    const auto a = testing::random_point(kind, rng);
    const auto b = testing::random_point(kind, rng);
    const auto times = testing::random_times(static_cast<std::size_t>(rng.uniform_int(2, 8)), rng);
    const auto subj = testing::noise_free_subject(a, b, times);
    const auto X = column(times);
    const auto stats = predictor_stats(X);
    for (double t : {0.0, 0.3, 0.5, 0.8, 1.0}) {
      const auto fit = gfr_fit(subj.obs, gfr_weights(stats, X, Eigen::VectorXd::Constant(1, t)));
      EXPECT_LT(dist(fit, geodesic_point(a, b, t)), 1e-8);
    }
  }
}

}  // namespace
}  // namespace geomix
