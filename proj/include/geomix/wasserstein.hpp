#pragma once

// Wasserstein-2 space of distributions on a compact interval, represented by
// quantile functions on a shared probability grid.

#include <cstddef>
#include <span>
#include <vector>

#include "geomix/metric_core.hpp"

namespace geomix::wasserstein {

/// Midpoints (k - 0.5)/G, k = 1..G.
std::vector<double> midpoint_grid(std::size_t grid_size);

/// Quantile function as an ObjectPoint of `kind`; validates monotonicity and support.
ObjectPoint make_quantile(const SpaceKind& kind, std::vector<double> values);

/// L2 distance between quantile functions under the equal-weight midpoint rule.
double distance(std::span<const double> q1, std::span<const double> q2);
double distance(const ObjectPoint& q1, const ObjectPoint& q2);

/// (1-t) q0 + t q1. Outside [0,1] the result must stay monotone and inside the
/// support (violations up to 1e-12 are clipped), else DomainError.
ObjectPoint geodesic(const ObjectPoint& q0, const ObjectPoint& q1, double t);

/// Least-squares nondecreasing fit (pool adjacent violators), equal weights.
std::vector<double> isotonic_project(std::span<const double> values);
/// Isotonic fit followed by clipping to [lo, hi]; the exact projection onto the
/// monotone cone intersected with the box.
std::vector<double> isotonic_project(std::span<const double> values, double lo, double hi);

/// Weighted Fréchet mean: pointwise weighted average, then isotonic projection.
/// info.projected is set when pooling or clipping changed the average.
MeanResult weighted_mean(std::span<const ObjectPoint> points, std::span<const double> weights);

/// Density 1/Q' transported to x_grid by finite differences of Q (piecewise
/// constant between grid quantiles, zero outside). DegenerateDensityError when two
/// consecutive quantiles are closer than 1e-8.
std::vector<double> to_density(const ObjectPoint& q, std::span<const double> x_grid);

}  // namespace geomix::wasserstein
