#pragma once

namespace geomix {

/// Standard normal cdf.
double normal_cdf(double x);
/// Standard normal upper tail 1 - Phi(x), accurate in the far right tail.
double normal_sf(double x);
/// Standard normal quantile (Wichura's AS241, ~1e-16 relative accuracy).
double normal_quantile(double p);

/// Cdf of N(xi, sigma^2) truncated to [0, 1].
double truncnorm_cdf(double xi, double sigma, double x);
/// Density of N(xi, sigma^2) truncated to [0, 1].
double truncnorm_pdf(double xi, double sigma, double x);
/// Inverse of truncnorm_cdf:
///   x = xi + sigma * Phi^{-1}(Phi(-xi/sigma) + p [Phi((1-xi)/sigma) - Phi(-xi/sigma)]),
/// evaluated through upper tails when the interval sits right of xi. Clamped to [0, 1].
double truncnorm_quantile(double xi, double sigma, double p);

}  // namespace geomix
