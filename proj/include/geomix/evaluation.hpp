#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "geomix/metric_core.hpp"
#include "geomix/mixed_effects.hpp"
#include "geomix/simulation.hpp"

namespace geomix {

struct EvalGrid {
  std::vector<double> t_grid;
  std::vector<double> z_grid;  // scalar covariate
};

/// nt equispaced points on [0,1] and nz on [z_lo, z_hi] (defaults 21 x 21).
EvalGrid make_eval_grid(double z_lo, double z_hi, std::size_t nt = 21, std::size_t nz = 21);

/// Trapezoid rule for samples y at sorted abscissae x. A single point integrates to 0.
double trapezoid(std::span<const double> x, std::span<const double> y);

using SurfaceFn = std::function<ObjectPoint(double t, double z)>;
using EndpointFn = std::function<GeodesicPair(double z)>;

/// Trapezoid double integral of d(truth(t,z), estimate(t,z)) over the grid
/// (d^2 when squared).
double ise(const SurfaceFn& truth, const SurfaceFn& estimate, const EvalGrid& grid,
           bool squared = false);
/// Same integral when both surfaces are geodesics in t for each z; each endpoint
/// function is called once per z.
double ise_geodesic(const EndpointFn& truth, const EndpointFn& estimate, const EvalGrid& grid,
                    bool squared = false);

/// sin(0.1): below it the true sphere endpoints are within 0.2 rad of antipodal.
inline constexpr double kSphereIseMinZ = 0.09983341664682815;

/// ISE of a fitted model against the generating model of a simulated dataset, over the
/// default grid spanning the dataset's observed covariate range (for the sphere,
/// intersected with z >= kSphereIseMinZ).
double model_ise(const FixedEffectsModel& model, const Dataset& ds, bool squared = false);
/// simulate -> two-step fit -> ISE for one replicate.
double replicate_ise(const SimulationConfig& cfg, bool squared = false, unsigned threads = 1);

/// sqrt( mean_i mean_j d_ij^2 ) over test subjects; distances[i] holds subject i's d_ij.
double rmpe(const std::vector<std::vector<double>>& distances);
/// RMPE of predictions[i][j] against test[i].obs[j].
double rmpe(const std::vector<SubjectRecord>& test,
            const std::vector<std::vector<ObjectPoint>>& predictions);
/// Predicts each test observation from a fitted model at the subject's z and time.
double rmpe(const FixedEffectsModel& model, const std::vector<SubjectRecord>& test);

struct Summary {
  double first_quartile;
  double mean;
  double median;
  double third_quartile;
};

/// Linear-interpolation quantile (type 7) of an unsorted sample.
double sample_quantile(std::vector<double> x, double p);
double median(std::vector<double> x);
Summary summarize(const std::vector<double>& x);

/// Zero diagonal; keeps the ceil(keep_frac * m(m-1)/2) largest |c_ij| (i < j), ties
/// broken by (row, col); kept entries are |c_ij|, symmetric.
Eigen::MatrixXd threshold_adjacency(const Eigen::MatrixXd& c, double keep_frac = 0.15);

/// Q = (1/2L) sum_ij [a_ij - k_i k_j / 2L] delta(c_i, c_j), 2L = sum_ij a_ij.
double modularity(const Eigen::MatrixXd& a, std::span<const int> communities);

struct LocationScale {
  double location;
  double scale;
};

/// Least-squares fit values ~ location + scale * basis.
LocationScale location_scale_fit(std::span<const double> values, std::span<const double> basis);

/// Ordinary least-squares slope of y on x.
double ols_slope(std::span<const double> x, std::span<const double> y);

}  // namespace geomix
