#include "geomix/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "geomix/error.hpp"

namespace geomix::wasserstein {

namespace {

constexpr double kAffineClipTol = 1e-12;

void require_wasserstein(const ObjectPoint& p) {
  if (p.tag() != SpaceTag::wasserstein1d)
    throw StructuralError("expected a wasserstein1d point");
}

}  // namespace

std::vector<double> midpoint_grid(std::size_t grid_size) {
  if (grid_size == 0) throw StructuralError("grid size must be positive");
  std::vector<double> grid(grid_size);
  for (std::size_t k = 0; k < grid_size; ++k)
    grid[k] = (static_cast<double>(k) + 0.5) / static_cast<double>(grid_size);
  return grid;
}

ObjectPoint make_quantile(const SpaceKind& kind, std::vector<double> values) {
  ObjectPoint q(kind, std::move(values));
  require_wasserstein(q);
  if (!validate(q)) throw DomainError("values are not a quantile function on the support");
  return q;
}

double distance(std::span<const double> q1, std::span<const double> q2) {
  if (q1.size() != q2.size()) throw StructuralError("quantile grids differ");
  double acc = 0.0;
  for (std::size_t k = 0; k < q1.size(); ++k) {
    const double diff = q1[k] - q2[k];
    acc += diff * diff;
  }
  return std::sqrt(acc / static_cast<double>(q1.size()));
}

double distance(const ObjectPoint& q1, const ObjectPoint& q2) {
  require_wasserstein(q1);
  require_same_kind(q1, q2);
  return distance(std::span<const double>(q1.payload()), std::span<const double>(q2.payload()));
}

ObjectPoint geodesic(const ObjectPoint& q0, const ObjectPoint& q1, double t) {
  require_wasserstein(q0);
  require_same_kind(q0, q1);
  const auto& grid = q0.kind().grid();
  const auto& a = q0.payload();
  const auto& b = q1.payload();
  std::vector<double> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    double v = (1.0 - t) * a[k] + t * b[k];
    if (v < grid.lo) {
      if (v < grid.lo - kAffineClipTol)
        throw DomainError("geodesic extension at t=" + std::to_string(t) + " leaves the support");
      v = grid.lo;
    } else if (v > grid.hi) {
      if (v > grid.hi + kAffineClipTol)
        throw DomainError("geodesic extension at t=" + std::to_string(t) + " leaves the support");
      v = grid.hi;
    }
    if (k > 0 && v < out[k - 1]) {
      if (v < out[k - 1] - kAffineClipTol)
        throw DomainError("geodesic extension at t=" + std::to_string(t) +
                          " is not a quantile function");
      v = out[k - 1];
    }
    out[k] = v;
  }
  return ObjectPoint(q0.kind(), std::move(out));
}

std::vector<double> isotonic_project(std::span<const double> values) {
  // Blocks as (sum, count); merge backwards while the last block's mean drops below
  // its predecessor's.
  struct Block {
    double sum;
    double count;
  };
  std::vector<Block> blocks;
  blocks.reserve(values.size());
  for (double v : values) {
    blocks.push_back({v, 1.0});
    while (blocks.size() > 1) {
      const Block& last = blocks.back();
      const Block& prev = blocks[blocks.size() - 2];
      if (prev.sum * last.count <= last.sum * prev.count) break;
      Block merged{prev.sum + last.sum, prev.count + last.count};
      blocks.pop_back();
      blocks.back() = merged;
    }
  }
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& b : blocks) {
    const double mean = b.sum / b.count;
    out.insert(out.end(), static_cast<std::size_t>(b.count), mean);
  }
  return out;
}

std::vector<double> isotonic_project(std::span<const double> values, double lo, double hi) {
  auto out = isotonic_project(values);
  for (double& v : out) v = std::clamp(v, lo, hi);
  return out;
}

MeanResult weighted_mean(std::span<const ObjectPoint> points, std::span<const double> weights) {
  require_mean_inputs(points, weights);
  require_wasserstein(points.front());
  const auto& kind = points.front().kind();
  const auto& grid = kind.grid();
  const double total = weight_sum(weights);

  std::vector<double> avg(kind.payload_size(), 0.0);
  for (std::size_t j = 0; j < points.size(); ++j) {
    const auto& q = points[j].payload();
    for (std::size_t k = 0; k < avg.size(); ++k) avg[k] += weights[j] * q[k];
  }
  for (double& v : avg) v /= total;

  bool monotone = true;
  bool inside = true;
  for (std::size_t k = 0; k < avg.size(); ++k) {
    if (k > 0 && avg[k] < avg[k - 1]) monotone = false;
    if (avg[k] < grid.lo || avg[k] > grid.hi) inside = false;
  }
  SolverInfo info;
  if (!monotone || !inside) {
    avg = isotonic_project(avg, grid.lo, grid.hi);
    info.projected = true;
  }
  return {ObjectPoint(kind, std::move(avg)), info};
}

std::vector<double> to_density(const ObjectPoint& q, std::span<const double> x_grid) {
  require_wasserstein(q);
  const auto& levels = q.kind().grid().levels;
  const auto& values = q.payload();
  if (values.size() < 2) throw DegenerateDensityError("need at least two quantiles for a density");
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (!(values[k] - values[k - 1] > 1e-8))
      throw DegenerateDensityError("quantile function is flat near p=" +
                                   std::to_string(levels[k]));
  }
  std::vector<double> density(x_grid.size(), 0.0);
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    const double x = x_grid[i];
    if (x < values.front() || x > values.back()) continue;
    auto it = std::upper_bound(values.begin(), values.end(), x);
    std::size_t k = static_cast<std::size_t>(it - values.begin());
    if (k == values.size()) k = values.size() - 1;
    if (k == 0) k = 1;
    density[i] = (levels[k] - levels[k - 1]) / (values[k] - values[k - 1]);
  }
  return density;
}

}  // namespace geomix::wasserstein
