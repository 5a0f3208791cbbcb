#include "geomix/frechet_regression.hpp"

#include <string>

#include "geomix/error.hpp"

namespace geomix {

namespace {

constexpr double kMaxCondition = 1e12;

PredictorStats finish(Eigen::VectorXd mean, Eigen::MatrixXd cov) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
  const double lmax = eig.eigenvalues().maxCoeff();
  const double lmin = eig.eigenvalues().minCoeff();
  if (!(lmax > 0.0) || !(lmin > 0.0) || lmax / lmin >= kMaxCondition)
    throw DegenerateDesignError("predictor covariance is singular (condition number >= 1e12)");
  PredictorStats s;
  s.cov_inv = cov.ldlt().solve(Eigen::MatrixXd::Identity(cov.rows(), cov.cols()));
  s.cov_inv = 0.5 * (s.cov_inv + s.cov_inv.transpose());
  s.mean = std::move(mean);
  s.cov = std::move(cov);
  return s;
}

}  // namespace

PredictorStats predictor_stats(const Eigen::MatrixXd& X) {
  const Eigen::Index n = X.rows();
  if (n < 2) throw DegenerateDesignError("GFR needs at least two observations");
  if (X.cols() < 1) throw StructuralError("predictor matrix has no columns");
  const Eigen::VectorXd mean = X.colwise().mean().transpose();
  const Eigen::MatrixXd centred = X.rowwise() - mean.transpose();
  Eigen::MatrixXd cov = (centred.transpose() * centred) / static_cast<double>(n);
  cov = 0.5 * (cov + cov.transpose());
  return finish(mean, std::move(cov));
}

PredictorStats predictor_stats_from(Eigen::VectorXd mean, Eigen::MatrixXd cov) {
  if (cov.rows() != cov.cols() || cov.rows() != mean.size())
    throw StructuralError("predictor mean and covariance dimensions differ");
  return finish(std::move(mean), std::move(cov));
}

GfrWeights gfr_weights(const PredictorStats& stats, const Eigen::MatrixXd& X,
                       const Eigen::VectorXd& x0) {
  const Eigen::Index p = stats.mean.size();
  if (X.cols() != p || x0.size() != p)
    throw StructuralError("predictor dimension " + std::to_string(X.cols()) + "/" +
                          std::to_string(x0.size()) + " does not match stats dimension " +
                          std::to_string(p));
  const Eigen::VectorXd b = stats.cov_inv * (x0 - stats.mean);
  GfrWeights out;
  out.target = x0;
  out.weights.resize(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    out.weights[static_cast<std::size_t>(i)] = 1.0 + (X.row(i).transpose() - stats.mean).dot(b);
  return out;
}

MeanResult gfr_fit_info(std::span<const ObjectPoint> points, const GfrWeights& weights) {
  if (points.size() != weights.weights.size())
    throw StructuralError("GFR: " + std::to_string(points.size()) + " points but " +
                          std::to_string(weights.weights.size()) + " weights");
  return weighted_frechet_mean_info(points, weights.weights);
}

ObjectPoint gfr_fit(std::span<const ObjectPoint> points, const GfrWeights& weights) {
  return gfr_fit_info(points, weights).point;
}

Eigen::MatrixXd column(std::span<const double> x) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(x.size()), 1);
  for (std::size_t i = 0; i < x.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = x[i];
  return m;
}

}  // namespace geomix
