#pragma once

// Two-step geodesic mixed-effects estimator.
//   1. Per subject: GFR on its own times, evaluated at t = 0 and t = 1, gives the
//      endpoints of the subject's geodesic.
//   2. GFR of those endpoints on the baseline covariate Z, separately per endpoint.
// A prediction at (t, z) is the point at t on the geodesic between the two fitted
// endpoint means.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geomix/frechet_regression.hpp"
#include "geomix/metric_core.hpp"

namespace geomix {

struct SubjectRecord {
  std::string id;
  Eigen::VectorXd z;
  std::vector<double> times;
  std::vector<ObjectPoint> obs;
};

struct SubjectFit {
  std::string id;
  Eigen::VectorXd z;
  GeodesicPair endpoints;
  SolverInfo info0;
  SolverInfo info1;
};

/// DegenerateDesignError carrying the subject id when n_i < 2 or the times are constant.
SubjectFit fit_subject(const SubjectRecord& subject);

/// Fits every subject (in parallel when threads > 1). Subjects with a degenerate
/// design abort the whole fit with one error listing all offending ids. Output order
/// follows input order regardless of the thread count.
std::vector<SubjectFit> fit_subjects(const std::vector<SubjectRecord>& subjects,
                                     unsigned threads = 1);

struct FixedEffectsModel {
  SpaceKind kind;
  Eigen::MatrixXd Z;  // n x p, row i = z of subject i
  PredictorStats z_stats;
  std::vector<std::string> ids;
  std::vector<ObjectPoint> start;  // fitted gamma_i(0)
  std::vector<ObjectPoint> end;    // fitted gamma_i(1)
};

FixedEffectsModel fit_fixed_effects(const std::vector<SubjectFit>& fits);

/// (zeta0(z0), zeta1(z0)): two GFR fits sharing the same covariate weights.
GeodesicPair predict_endpoints(const FixedEffectsModel& model, const Eigen::VectorXd& z0);

ObjectPoint predict_trajectory(const GeodesicPair& pair, double t);

/// Convenience: fit_subjects followed by fit_fixed_effects.
FixedEffectsModel fit_two_step(const std::vector<SubjectRecord>& subjects, unsigned threads = 1);

/// Runs body(i) for i in [0, n) on up to `threads` workers. The first exception (by
/// index) is rethrown after all workers finish.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

/// GEOMIX_THREADS if set to a positive integer, else 1.
unsigned threads_from_env();

}  // namespace geomix
