#pragma once

// The unit sphere S^2 with the arc-length metric d(x, y) = arccos<x, y>.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "geomix/metric_core.hpp"

namespace geomix::sphere {

using Vec3 = Eigen::Vector3d;

inline constexpr double kMinAngle = 1e-6;
inline constexpr double kGradTol = 1e-9;
inline constexpr int kMaxIterations = 200;

Vec3 to_vec(const ObjectPoint& p);
ObjectPoint from_vec(const Vec3& v);
/// v / ||v||; DomainError for a (near) zero vector.
ObjectPoint make_point(const Vec3& v);

/// Great-circle angle, computed as atan2(||x cross y||, <x, y>).
double distance(const Vec3& x, const Vec3& y);

/// Tangent vector at `base` pointing to `x` with length d(base, x).
/// DomainError when x is (numerically) antipodal to base.
Vec3 log_map(const Vec3& base, const Vec3& x);
Vec3 exp_map(const Vec3& base, const Vec3& v);

/// Slerp from x (t = 0) to y (t = 1); extends past [0,1].
/// DomainError when the angle exceeds pi - kMinAngle (the geodesic is not unique).
Vec3 geodesic(const Vec3& x, const Vec3& y, double t);

/// F(mu) = sum_j w_j d^2(mu, x_j).
double objective(const Vec3& mu, std::span<const Vec3> points, std::span<const double> weights);
/// Riemannian gradient of F at mu: -2 sum_j w_j log_mu(x_j).
Vec3 gradient(const Vec3& mu, std::span<const Vec3> points, std::span<const double> weights);

struct SphereMean {
  Vec3 mean;
  SolverInfo info;
};

/// Weighted Fréchet mean by intrinsic descent.
///
/// Initial point: the normalised extrinsic weighted average, or the point with the
/// largest weight when that average is shorter than 1e-8. Each iteration takes a
/// Riemannian Newton direction when the tangent Hessian is positive definite and the
/// normalised gradient otherwise, starts at step 1 and halves until F decreases, and
/// retracts with the exponential map. Stops when
/// ||sum_j w_j log_mu(x_j)|| / sum_j |w_j| <= kGradTol or after kMaxIterations.
/// With negative weights the minimum can sit on the cut locus of a negatively weighted
/// point x_j, at -x_j, where F has a cone-shaped minimum. Each such -x_j is accepted
/// when it beats the smooth result and the cone dominates the smooth part of the
/// gradient there. Throws ConvergenceError when neither route yields a minimum
/// (smooth gradient above 1e-7 and no cusp candidate).
SphereMean weighted_mean(std::span<const Vec3> points, std::span<const double> weights);

double distance(const ObjectPoint& a, const ObjectPoint& b);
ObjectPoint geodesic(const ObjectPoint& a, const ObjectPoint& b, double t);
MeanResult weighted_mean(std::span<const ObjectPoint> points, std::span<const double> weights);
bool is_valid(const ObjectPoint& p);

}  // namespace geomix::sphere
