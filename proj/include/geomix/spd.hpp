#pragma once

// Symmetric positive-definite matrices under the power-Euclidean metric
//   d_P(A, B) = (1/alpha) * ||A^alpha - B^alpha||_F.
// Geodesics and Fréchet means are affine in "root space" A -> A^alpha.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "geomix/metric_core.hpp"

namespace geomix::spd {

/// Minimum eigenvalue kept after projecting a signed-weight average back into the cone.
inline constexpr double kEigFloor = 1e-8;

Eigen::MatrixXd to_matrix(const ObjectPoint& p);
/// Row-major payload of `m` in an SPD space of matching dimension.
ObjectPoint from_matrix(const SpaceKind& kind, const Eigen::MatrixXd& m);

/// U diag(lambda^alpha) U^T. Eigenvalues in [-1e-12 * scale, 0) are treated as zero;
/// more negative ones raise DomainError.
Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& a, double alpha);

double power_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double alpha);

/// ((1-t) A^alpha + t B^alpha)^(1/alpha); gamma(0) = A. DomainError when the root-space
/// combination has an eigenvalue below kEigFloor (only possible for t outside [0,1]).
Eigen::MatrixXd geodesic(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double t,
                         double alpha);

struct SpdMean {
  Eigen::MatrixXd mean;
  bool clipped = false;
};

/// Closed-form Fréchet mean: root-space weighted average, symmetrised, eigenvalues
/// floored at kEigFloor (flagged), then raised to 1/alpha.
SpdMean weighted_mean(std::span<const Eigen::MatrixXd> points, std::span<const double> weights,
                      double alpha);

// ObjectPoint-level entry points used by the metric_core dispatcher.
double distance(const ObjectPoint& a, const ObjectPoint& b);
ObjectPoint geodesic(const ObjectPoint& a, const ObjectPoint& b, double t);
MeanResult weighted_mean(std::span<const ObjectPoint> points, std::span<const double> weights);
bool is_valid(const ObjectPoint& p);

}  // namespace geomix::spd
