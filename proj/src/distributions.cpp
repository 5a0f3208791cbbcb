#include "geomix/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "geomix/error.hpp"

namespace geomix {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw DomainError("normal quantile needs p in [0,1]");
  }
  // Wichura (1988), Algorithm AS241 PPND16.
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2509.0809287301226727 * r + 33430.575583588128105) * r +
                 67265.770927008700853) * r + 45921.953931549871457) * r +
               13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((5226.495278852545925 * r + 28729.085735721942674) * r +
                 39307.89580009271061) * r + 21213.794301586595867) * r +
               5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r +
                0.24178072517745061177) * r + 1.27045825245236838258) * r +
              3.64784832476320460504) * r + 5.7694972214606914055) * r +
            4.6303378461565452959) * r + 1.42343711074968357734) /
          (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r +
                0.0151986665636164571966) * r + 0.14810397642748007459) * r +
              0.68976733498510000455) * r + 1.6763848301838038494) * r +
            2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                0.0012426609473880784386) * r + 0.026532189526576123093) * r +
              0.29656057182850489123) * r + 1.7848265399172913358) * r +
            5.4637849111641143699) * r + 6.6579046435011037772) /
          (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r +
                1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
              0.0148753612908506148525) * r + 0.13692988092273580531) * r +
            0.59983220655588793769) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

namespace {

void require_sigma(double sigma) {
  if (!(sigma > 0.0)) throw DomainError("truncated normal needs sigma > 0");
}

constexpr double kLogSqrt2Pi = 0.91893853320467274178;
// Above this normal_sf is still a normal double; beyond it the asymptotic series is
// accurate to ~1e-15.
constexpr double kSeriesFrom = 37.0;

double log_pdf(double x) { return -0.5 * x * x - kLogSqrt2Pi; }

// log(1 - Phi(x)).
double log_sf(double x) {
  if (x <= kSeriesFrom) return std::log(normal_sf(x));
  const double r = 1.0 / (x * x);
  const double series = 1.0 - r * (1.0 - 3.0 * r * (1.0 - 5.0 * r * (1.0 - 7.0 * r * (1.0 - 9.0 * r))));
  return log_pdf(x) - std::log(x) + std::log(series);
}

// Inverse of log_sf.
double inverse_log_sf(double l) {
  if (l > std::log(normal_sf(kSeriesFrom))) return -normal_quantile(std::exp(l));
  double x = std::sqrt(-2.0 * l);
  for (int it = 0; it < 50; ++it) {
    const double f = log_sf(x) - l;
    const double slope = -std::exp(log_pdf(x) - log_sf(x));
    const double step = f / slope;
    x -= step;
    if (std::abs(step) <= 1e-15 * x) break;
  }
  return x;
}

// Standardised truncation bounds (a, b) with 0 < a < b: the interval lies right of the mean.
// log S(a) and log(S(a) - S(b)) - log S(a).
struct RightTail {
  double log_sa;
  double log_frac;  // log(1 - S(b)/S(a))
};

RightTail right_tail(double a, double b) {
  const double log_sa = log_sf(a);
  return {log_sa, std::log(-std::expm1(log_sf(b) - log_sa))};
}

}  // namespace

// The truncated law is mirrored (x -> 1 - x, xi -> 1 - xi) when [0,1] lies left of xi, so
// the tail branches below only ever see an interval right of the mean.

double truncnorm_cdf(double xi, double sigma, double x) {
  require_sigma(sigma);
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = -xi / sigma;
  const double b = (1.0 - xi) / sigma;
  if (b < 0.0) return 1.0 - truncnorm_cdf(1.0 - xi, sigma, 1.0 - x);
  const double z = (x - xi) / sigma;
  if (a > 0.0) {
    const RightTail t = right_tail(a, b);
    return -std::expm1(log_sf(z) - t.log_sa) / std::exp(t.log_frac);
  }
  return (normal_cdf(z) - normal_cdf(a)) / (normal_cdf(b) - normal_cdf(a));
}

double truncnorm_pdf(double xi, double sigma, double x) {
  require_sigma(sigma);
  if (x < 0.0 || x > 1.0) return 0.0;
  const double a = -xi / sigma;
  const double b = (1.0 - xi) / sigma;
  if (b < 0.0) return truncnorm_pdf(1.0 - xi, sigma, 1.0 - x);
  const double z = (x - xi) / sigma;
  double log_mass;
  if (a > 0.0) {
    const RightTail t = right_tail(a, b);
    log_mass = t.log_sa + t.log_frac;
  } else {
    log_mass = std::log(normal_cdf(b) - normal_cdf(a));
  }
  return std::exp(log_pdf(z) - log_mass) / sigma;
}

double truncnorm_quantile(double xi, double sigma, double p) {
  require_sigma(sigma);
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("truncated normal quantile needs p in [0,1]");
  const double a = -xi / sigma;
  const double b = (1.0 - xi) / sigma;
  if (b < 0.0) return 1.0 - truncnorm_quantile(1.0 - xi, sigma, 1.0 - p);
  double z;
  if (a > 0.0) {
    // S(z) = S(a) (1 - p (1 - S(b)/S(a)))
    const RightTail t = right_tail(a, b);
    z = inverse_log_sf(t.log_sa + std::log1p(-p * std::exp(t.log_frac)));
  } else {
    const double fa = normal_cdf(a);
    const double fb = normal_cdf(b);
    z = normal_quantile(fa + p * (fb - fa));
  }
  return std::clamp(xi + sigma * z, 0.0, 1.0);
}

}  // namespace geomix
