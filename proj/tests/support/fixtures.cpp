#include "fixtures.hpp"

#include <algorithm>
#include <cmath>

#include "geomix/error.hpp"
#include "geomix/simulation.hpp"
#include "geomix/spd.hpp"
#include "geomix/sphere.hpp"
#include "geomix/wasserstein.hpp"

namespace geomix::testing {

std::vector<SpaceKind> all_kinds() {
  return {SpaceKind::euclidean1d(), SpaceKind::wasserstein_midpoint(40), SpaceKind::spd(3, 0.5),
          SpaceKind::sphere()};
}

ObjectPoint euclid(double x) { return ObjectPoint(SpaceKind::euclidean1d(), {x}); }

ObjectPoint random_point(const SpaceKind& kind, Philox& rng) {
  switch (kind.tag()) {
    case SpaceTag::euclidean1d:
      return euclid(3.0 * rng.normal());
    case SpaceTag::wasserstein1d: {
      const auto& g = kind.grid();
      const std::size_t m = g.levels.size();
      std::vector<double> v(m);
      for (auto& x : v) x = rng.uniform01();
      std::sort(v.begin(), v.end());
      // Strictly increasing, inside [lo + 10%, hi - 10%] of the support.
      const double span = g.hi - g.lo;
      for (std::size_t i = 0; i < m; ++i) {
        const double ramp = static_cast<double>(i) / static_cast<double>(m);
        v[i] = g.lo + span * (0.1 + 0.8 * (0.5 * v[i] + 0.5 * ramp));
      }
      return wasserstein::make_quantile(kind, std::move(v));
    }
    case SpaceTag::spd: {
      const int d = kind.dim();
      Eigen::MatrixXd m(d, d);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) m(r, c) = rng.normal();
      const Eigen::MatrixXd a = m * m.transpose() + 0.5 * Eigen::MatrixXd::Identity(d, d);
      return spd::from_matrix(kind, a);
    }
    case SpaceTag::sphere:
      return sphere::make_point(sphere::Vec3(rng.normal(), rng.normal(), rng.normal()));
  }
  throw StructuralError("unknown space");
}

ObjectPoint random_neighbour(const ObjectPoint& a, double max_step, Philox& rng) {
  if (a.tag() == SpaceTag::sphere) {
    const sphere::Vec3 x = sphere::to_vec(a);
    sphere::Vec3 v(rng.normal(), rng.normal(), rng.normal());
    v -= v.dot(x) * x;
    v = v.normalized() * (max_step * (0.2 + 0.8 * rng.uniform01()));
    return sphere::from_vec(sphere::exp_map(x, v));
  }
  ObjectPoint b = random_point(a.kind(), rng);
  const double d = dist(a, b);
  if (d <= max_step) return b;
  return geodesic_point(a, b, max_step / d);
}

std::vector<double> random_times(std::size_t n, Philox& rng) {
  std::vector<double> t(n);
  do {
    for (auto& x : t) x = rng.uniform01();
    std::sort(t.begin(), t.end());
  } while (t.back() - t.front() < 0.05);
  return t;
}

SubjectRecord noise_free_subject(const ObjectPoint& a, const ObjectPoint& b,
                                 std::vector<double> times, std::string id, double z) {
  SubjectRecord s;
  s.id = std::move(id);
  s.z = Eigen::VectorXd::Constant(1, z);
  for (double t : times) s.obs.push_back(geodesic_point(a, b, t));
  s.times = std::move(times);
  return s;
}

std::vector<SubjectRecord> euclidean_dataset(std::size_t n, std::uint64_t seed) {
  std::vector<SubjectRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    Philox rng(seed, i);
    const double z = 2.0 * rng.uniform01() - 1.0;
    const double y0 = 0.3 * z + 0.5 * rng.normal();
    const double y1 = 0.25 + 0.3 * z + 0.5 * rng.normal();
    auto times = sample_times(Design::sparse, rng);
    out.push_back(noise_free_subject(euclid(y0), euclid(y1), std::move(times), std::to_string(i), z));
  }
  return out;
}

GeodesicPair euclidean_truth(double z) { return {euclid(0.3 * z), euclid(0.25 + 0.3 * z)}; }

}  // namespace geomix::testing
