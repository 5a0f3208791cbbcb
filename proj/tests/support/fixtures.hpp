#pragma once

// Random points and noise-free longitudinal subjects for tests.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "geomix/metric_core.hpp"
#include "geomix/mixed_effects.hpp"
#include "geomix/random.hpp"

namespace geomix::testing {

/// 1-d, 40-point Wasserstein on [0,1], 3x3 SPD and the sphere, in that order after
/// euclidean1d.
std::vector<SpaceKind> all_kinds();

/// A generic random element of the space. Wasserstein points are strictly increasing
/// and keep a margin from the support edges.
ObjectPoint random_point(const SpaceKind& kind, Philox& rng);

/// A second point at distance at most `max_step` (sphere: arc length) from `a`.
ObjectPoint random_neighbour(const ObjectPoint& a, double max_step, Philox& rng);

/// Sorted iid U(0,1) times, redrawn until they span at least 0.05.
std::vector<double> random_times(std::size_t n, Philox& rng);

/// Observations exactly on the geodesic from a (t = 0) to b (t = 1).
SubjectRecord noise_free_subject(const ObjectPoint& a, const ObjectPoint& b,
                                 std::vector<double> times, std::string id = "s",
                                 double z = 0.0);

ObjectPoint euclid(double x);

/// Linear mixed model on the real line: z ~ U(-1,1), gamma_i(k) = 0.25 k + 0.3 z_i + b_ik
/// with b_ik ~ N(0, 0.25), observations exactly on the subject's line at sparse-design
/// times. Same stream layout idea as the simulator: one stream per subject.
std::vector<SubjectRecord> euclidean_dataset(std::size_t n, std::uint64_t seed);
/// Conditional mean endpoints of euclidean_dataset at z.
GeodesicPair euclidean_truth(double z);

}  // namespace geomix::testing
