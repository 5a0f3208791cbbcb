#pragma once

// Global Fréchet regression: linear-in-predictor weights and the weighted
// Fréchet mean they define.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "geomix/metric_core.hpp"

namespace geomix {

struct PredictorStats {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;      // divisor n
  Eigen::MatrixXd cov_inv;
};

/// Rows of X are observations. Needs n >= 2 and a covariance with condition number
/// below 1e12, else DegenerateDesignError.
PredictorStats predictor_stats(const Eigen::MatrixXd& X);
/// Rebuilds the inverse from a stored mean and covariance (used when loading fits).
PredictorStats predictor_stats_from(Eigen::VectorXd mean, Eigen::MatrixXd cov);

struct GfrWeights {
  std::vector<double> weights;
  Eigen::VectorXd target;
};

/// w_i = 1 + (X_i - mean)^T cov_inv (x0 - mean). The weights sum to n.
GfrWeights gfr_weights(const PredictorStats& stats, const Eigen::MatrixXd& X,
                       const Eigen::VectorXd& x0);

MeanResult gfr_fit_info(std::span<const ObjectPoint> points, const GfrWeights& weights);
ObjectPoint gfr_fit(std::span<const ObjectPoint> points, const GfrWeights& weights);

/// Convenience for scalar predictors.
Eigen::MatrixXd column(std::span<const double> x);

}  // namespace geomix
