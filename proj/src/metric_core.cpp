#include "geomix/metric_core.hpp"

#include <cmath>
#include <numeric>

#include "geomix/error.hpp"
#include "geomix/spd.hpp"
#include "geomix/sphere.hpp"
#include "geomix/wasserstein.hpp"

namespace geomix {

std::string_view to_string(SpaceTag tag) {
  switch (tag) {
    case SpaceTag::euclidean1d:
      return "euclidean1d";
    case SpaceTag::wasserstein1d:
      return "wasserstein1d";
    case SpaceTag::spd:
      return "spd";
    case SpaceTag::sphere:
      return "sphere";
  }
  return "unknown";
}

SpaceTag parse_space_tag(std::string_view name) {
  for (auto tag : {SpaceTag::euclidean1d, SpaceTag::wasserstein1d, SpaceTag::spd,
                   SpaceTag::sphere}) {
    if (to_string(tag) == name) return tag;
  }
  throw StructuralError("unknown space '" + std::string(name) + "'");
}

SpaceKind SpaceKind::euclidean1d() { return SpaceKind{}; }

SpaceKind SpaceKind::wasserstein(std::vector<double> levels, double lo, double hi) {
  if (levels.empty()) throw StructuralError("quantile grid is empty");
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (!(levels[k] > 0.0 && levels[k] < 1.0))
      throw StructuralError("quantile grid levels must lie in (0,1)");
    if (k > 0 && !(levels[k] > levels[k - 1]))
      throw StructuralError("quantile grid must be strictly increasing");
  }
  if (!(lo < hi)) throw StructuralError("support must satisfy lo < hi");
  SpaceKind kind;
  kind.tag_ = SpaceTag::wasserstein1d;
  kind.grid_ = std::make_shared<const QuantileGrid>(QuantileGrid{std::move(levels), lo, hi});
  return kind;
}

SpaceKind SpaceKind::wasserstein_midpoint(std::size_t grid_size, double lo, double hi) {
  return wasserstein(wasserstein::midpoint_grid(grid_size), lo, hi);
}

SpaceKind SpaceKind::spd(int dim, double power) {
  if (dim < 1) throw StructuralError("SPD dimension must be >= 1");
  if (!(power > 0.0 && power <= 1.0)) throw StructuralError("SPD power must lie in (0,1]");
  SpaceKind kind;
  kind.tag_ = SpaceTag::spd;
  kind.dim_ = dim;
  kind.power_ = power;
  return kind;
}

SpaceKind SpaceKind::sphere() {
  SpaceKind kind;
  kind.tag_ = SpaceTag::sphere;
  kind.dim_ = 3;
  return kind;
}

std::size_t SpaceKind::payload_size() const noexcept {
  switch (tag_) {
    case SpaceTag::euclidean1d:
      return 1;
    case SpaceTag::wasserstein1d:
      return grid_->levels.size();
    case SpaceTag::spd:
      return static_cast<std::size_t>(dim_) * static_cast<std::size_t>(dim_);
    case SpaceTag::sphere:
      return 3;
  }
  return 0;
}

const QuantileGrid& SpaceKind::grid() const {
  if (tag_ != SpaceTag::wasserstein1d) throw StructuralError("space has no quantile grid");
  return *grid_;
}

bool operator==(const SpaceKind& a, const SpaceKind& b) {
  if (a.tag_ != b.tag_) return false;
  switch (a.tag_) {
    case SpaceTag::euclidean1d:
    case SpaceTag::sphere:
      return true;
    case SpaceTag::spd:
      return a.dim_ == b.dim_ && a.power_ == b.power_;
    case SpaceTag::wasserstein1d:
      if (a.grid_ == b.grid_) return true;
      return a.grid_->lo == b.grid_->lo && a.grid_->hi == b.grid_->hi &&
             a.grid_->levels == b.grid_->levels;
  }
  return false;
}

ObjectPoint::ObjectPoint(SpaceKind kind, std::vector<double> payload)
    : kind_(std::move(kind)), payload_(std::move(payload)) {
  if (payload_.size() != kind_.payload_size()) {
    throw StructuralError("payload length " + std::to_string(payload_.size()) +
                          " does not match " + std::string(to_string(kind_.tag())) +
                          " (expected " + std::to_string(kind_.payload_size()) + ")");
  }
}

GeodesicPair::GeodesicPair(ObjectPoint start, ObjectPoint end)
    : p0(std::move(start)), p1(std::move(end)) {
  if (!(p0.kind() == p1.kind())) throw StructuralError("geodesic endpoints differ in kind");
}

void require_same_kind(const ObjectPoint& a, const ObjectPoint& b) {
  if (!(a.kind() == b.kind())) {
    throw StructuralError("points belong to different spaces (" +
                          std::string(to_string(a.tag())) + " vs " +
                          std::string(to_string(b.tag())) + ")");
  }
}

double weight_sum(std::span<const double> weights) {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

void require_mean_inputs(std::span<const ObjectPoint> points, std::span<const double> weights) {
  if (points.empty()) throw StructuralError("Fréchet mean of an empty set");
  if (points.size() != weights.size())
    throw StructuralError("points and weights differ in length");
  for (const auto& p : points) require_same_kind(points.front(), p);
  const double total = weight_sum(weights);
  if (!(total > 0.0)) {
    throw DegenerateWeightsError("sum of Fréchet weights is not positive (" +
                                 std::to_string(total) + ")");
  }
}

bool validate(const ObjectPoint& p) {
  const auto& v = p.payload();
  switch (p.tag()) {
    case SpaceTag::euclidean1d:
      return std::isfinite(v[0]);
    case SpaceTag::wasserstein1d: {
      const auto& grid = p.kind().grid();
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (!std::isfinite(v[k])) return false;
        if (v[k] < grid.lo - kInvariantTol || v[k] > grid.hi + kInvariantTol) return false;
        if (k > 0 && v[k] < v[k - 1] - kInvariantTol) return false;
      }
      return true;
    }
    case SpaceTag::spd:
      return spd::is_valid(p);
    case SpaceTag::sphere:
      return sphere::is_valid(p);
  }
  return false;
}

double dist(const ObjectPoint& a, const ObjectPoint& b) {
  require_same_kind(a, b);
  switch (a.tag()) {
    case SpaceTag::euclidean1d:
      return std::abs(a[0] - b[0]);
    case SpaceTag::wasserstein1d:
      return wasserstein::distance(a, b);
    case SpaceTag::spd:
      return spd::distance(a, b);
    case SpaceTag::sphere:
      return sphere::distance(a, b);
  }
  return 0.0;
}

ObjectPoint geodesic_point(const ObjectPoint& a, const ObjectPoint& b, double t) {
  require_same_kind(a, b);
  switch (a.tag()) {
    case SpaceTag::euclidean1d:
      return ObjectPoint(a.kind(), {(1.0 - t) * a[0] + t * b[0]});
    case SpaceTag::wasserstein1d:
      return wasserstein::geodesic(a, b, t);
    case SpaceTag::spd:
      return spd::geodesic(a, b, t);
    case SpaceTag::sphere:
      return sphere::geodesic(a, b, t);
  }
  return a;
}

MeanResult weighted_frechet_mean_info(std::span<const ObjectPoint> points,
                                      std::span<const double> weights) {
  require_mean_inputs(points, weights);
  switch (points.front().tag()) {
    case SpaceTag::euclidean1d: {
      double num = 0.0;
      for (std::size_t j = 0; j < points.size(); ++j) num += weights[j] * points[j][0];
      return {ObjectPoint(points.front().kind(), {num / weight_sum(weights)}), SolverInfo{}};
    }
    case SpaceTag::wasserstein1d:
      return wasserstein::weighted_mean(points, weights);
    case SpaceTag::spd:
      return spd::weighted_mean(points, weights);
    case SpaceTag::sphere:
      return sphere::weighted_mean(points, weights);
  }
  throw StructuralError("unsupported space");
}

ObjectPoint weighted_frechet_mean(std::span<const ObjectPoint> points,
                                  std::span<const double> weights) {
  return weighted_frechet_mean_info(points, weights).point;
}

double product_dist(const GeodesicPair& u, const GeodesicPair& v) {
  return std::hypot(dist(u.p0, v.p0), dist(u.p1, v.p1));
}

}  // namespace geomix
