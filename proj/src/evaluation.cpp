#include "geomix/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "geomix/error.hpp"

namespace geomix {

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (std::size_t i = 0; i < n; ++i)
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  v.back() = hi;
  return v;
}

void require_grid(const EvalGrid& g) {
  if (g.t_grid.empty() || g.z_grid.empty()) throw StructuralError("evaluation grid is empty");
  if (!std::is_sorted(g.t_grid.begin(), g.t_grid.end()) ||
      !std::is_sorted(g.z_grid.begin(), g.z_grid.end()))
    throw StructuralError("evaluation grid must be sorted");
}

double integrate_surface(const EvalGrid& grid, const std::vector<std::vector<double>>& values) {
  // values[iz][it]
  std::vector<double> inner(grid.z_grid.size());
  for (std::size_t iz = 0; iz < grid.z_grid.size(); ++iz) inner[iz] = trapezoid(grid.t_grid, values[iz]);
  return trapezoid(grid.z_grid, inner);
}

}  // namespace

EvalGrid make_eval_grid(double z_lo, double z_hi, std::size_t nt, std::size_t nz) {
  if (nt == 0 || nz == 0) throw StructuralError("evaluation grid needs at least one point");
  if (z_hi < z_lo) throw StructuralError("covariate range is reversed");
  return {linspace(0.0, 1.0, nt), linspace(z_lo, z_hi, nz)};
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw StructuralError("trapezoid: abscissae and values differ in length");
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

double ise(const SurfaceFn& truth, const SurfaceFn& estimate, const EvalGrid& grid, bool squared) {
  require_grid(grid);
  std::vector<std::vector<double>> v(grid.z_grid.size(), std::vector<double>(grid.t_grid.size()));
  for (std::size_t iz = 0; iz < grid.z_grid.size(); ++iz) {
    for (std::size_t it = 0; it < grid.t_grid.size(); ++it) {
      const double t = grid.t_grid[it];
      const double z = grid.z_grid[iz];
      const double d = dist(truth(t, z), estimate(t, z));
      v[iz][it] = squared ? d * d : d;
    }
  }
  return integrate_surface(grid, v);
}

double ise_geodesic(const EndpointFn& truth, const EndpointFn& estimate, const EvalGrid& grid,
                    bool squared) {
  require_grid(grid);
  std::vector<std::vector<double>> v(grid.z_grid.size(), std::vector<double>(grid.t_grid.size()));
  for (std::size_t iz = 0; iz < grid.z_grid.size(); ++iz) {
    const double z = grid.z_grid[iz];
    const GeodesicPair a = truth(z);
    const GeodesicPair b = estimate(z);
    for (std::size_t it = 0; it < grid.t_grid.size(); ++it) {
      const double t = grid.t_grid[it];
      const double d = dist(geodesic_point(a.p0, a.p1, t), geodesic_point(b.p0, b.p1, t));
      v[iz][it] = squared ? d * d : d;
    }
  }
  return integrate_surface(grid, v);
}

double model_ise(const FixedEffectsModel& model, const Dataset& ds, bool squared) {
  if (!ds.simulation)
    throw StructuralError("ISE needs the generating model; the dataset has no simulation block");
  if (ds.subjects.empty()) throw StructuralError("ISE of an empty dataset");
  if (ds.subjects.front().z.size() != 1) throw StructuralError("ISE needs a scalar covariate");
  double lo = ds.subjects.front().z(0), hi = lo;
  for (const auto& s : ds.subjects) {
    lo = std::min(lo, s.z(0));
    hi = std::max(hi, s.z(0));
  }
  const SimulationConfig& cfg = *ds.simulation;
  if (cfg.setting == Setting::Sphere) {
    // The true endpoints approach antipodal as z -> 0, where the geodesic between them
    // stops being unique; keep z where they are at least 0.2 rad from antipodal.
    lo = std::max(lo, kSphereIseMinZ);
    if (hi < lo) throw DomainError("no covariate values where the sphere truth is well defined");
  }
  const SpaceKind kind = ds.kind;
  return ise_geodesic([&](double z) { return population_endpoints(cfg, kind, z); },
                      [&](double z) { return predict_endpoints(model, Eigen::VectorXd::Constant(1, z)); },
                      make_eval_grid(lo, hi), squared);
}

double replicate_ise(const SimulationConfig& cfg, bool squared, unsigned threads) {
  const Dataset ds = generate_dataset(cfg);
  return model_ise(fit_two_step(ds.subjects, threads), ds, squared);
}

double rmpe(const std::vector<std::vector<double>>& distances) {
  if (distances.empty()) throw StructuralError("RMPE of an empty test set");
  double acc = 0.0;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    if (distances[i].empty())
      throw StructuralError("test subject " + std::to_string(i) + " has no observations");
    double s = 0.0;
    for (double d : distances[i]) s += d * d;
    acc += s / static_cast<double>(distances[i].size());
  }
  return std::sqrt(acc / static_cast<double>(distances.size()));
}

double rmpe(const std::vector<SubjectRecord>& test,
            const std::vector<std::vector<ObjectPoint>>& predictions) {
  if (test.size() != predictions.size())
    throw StructuralError("RMPE: test set and predictions differ in size");
  std::vector<std::vector<double>> d(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (test[i].obs.size() != predictions[i].size())
      throw StructuralError("RMPE: subject " + test[i].id + " has mismatched predictions");
    for (std::size_t j = 0; j < test[i].obs.size(); ++j)
      d[i].push_back(dist(test[i].obs[j], predictions[i][j]));
  }
  return rmpe(d);
}

double rmpe(const FixedEffectsModel& model, const std::vector<SubjectRecord>& test) {
  std::vector<std::vector<ObjectPoint>> pred(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto ends = predict_endpoints(model, test[i].z);
    for (double t : test[i].times) pred[i].push_back(predict_trajectory(ends, t));
  }
  return rmpe(test, pred);
}

double sample_quantile(std::vector<double> x, double p) {
  if (x.empty()) throw StructuralError("quantile of an empty sample");
  std::sort(x.begin(), x.end());
  const double h = (static_cast<double>(x.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (h - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

double median(std::vector<double> x) { return sample_quantile(std::move(x), 0.5); }

Summary summarize(const std::vector<double>& x) {
  if (x.empty()) throw StructuralError("summary of an empty sample");
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  return {sample_quantile(x, 0.25), mean, sample_quantile(x, 0.5), sample_quantile(x, 0.75)};
}

Eigen::MatrixXd threshold_adjacency(const Eigen::MatrixXd& c, double keep_frac) {
  if (c.rows() != c.cols()) throw StructuralError("threshold_adjacency needs a square matrix");
  if (!(keep_frac > 0.0 && keep_frac <= 1.0)) throw DomainError("keep_frac must lie in (0, 1]");
  const Eigen::Index m = c.rows();
  struct Edge {
    double w;
    Eigen::Index r, c;
  };
  std::vector<Edge> edges;
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index k = r + 1; k < m; ++k) edges.push_back({std::abs(c(r, k)), r, k});
  // Edges are generated in (row, col) order, so a stable sort keeps ties lexicographic.
  std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.w > b.w; });
  const auto keep = std::min<std::size_t>(
      edges.size(),
      static_cast<std::size_t>(std::ceil(keep_frac * static_cast<double>(edges.size()) - 1e-12)));
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t e = 0; e < keep; ++e) {
    a(edges[e].r, edges[e].c) = edges[e].w;
    a(edges[e].c, edges[e].r) = edges[e].w;
  }
  return a;
}

double modularity(const Eigen::MatrixXd& a, std::span<const int> communities) {
  const Eigen::Index m = a.rows();
  if (a.cols() != m || static_cast<std::size_t>(m) != communities.size())
    throw StructuralError("modularity: adjacency and community labels differ in size");
  const double two_l = a.sum();
  if (!(two_l > 0.0)) throw DomainError("modularity of a graph without edges");
  const Eigen::VectorXd k = a.rowwise().sum();
  double q = 0.0;
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j)
      if (communities[static_cast<std::size_t>(i)] == communities[static_cast<std::size_t>(j)])
        q += a(i, j) - k(i) * k(j) / two_l;
  return q / two_l;
}

LocationScale location_scale_fit(std::span<const double> values, std::span<const double> basis) {
  const double b = ols_slope(basis, values);
  const double n = static_cast<double>(values.size());
  const double mv = std::accumulate(values.begin(), values.end(), 0.0) / n;
  const double mb = std::accumulate(basis.begin(), basis.end(), 0.0) / n;
  return {mv - b * mb, b};
}

double ols_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw StructuralError("OLS needs two or more pairs");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (!(sxx > 0.0)) throw DegenerateDesignError("OLS with a constant regressor");
  return sxy / sxx;
}

}  // namespace geomix
