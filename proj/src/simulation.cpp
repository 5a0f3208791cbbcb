#include "geomix/simulation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "geomix/distributions.hpp"
#include "geomix/error.hpp"
#include "geomix/wasserstein.hpp"

namespace geomix {

namespace {

// Stream families; subject i uses family ^ i.
constexpr std::uint64_t kLatentStream = 0x4C41'0000'0000'0000ull;
constexpr std::uint64_t kDesignStream = 0x4445'0000'0000'0000ull;
constexpr std::uint64_t kNoiseStream = 0x4E4F'0000'0000'0000ull;

constexpr int kMaxRedraws = 10000;
constexpr double kMinScale = 0.01;
constexpr double kSphereMaxEndpointAngle = std::numbers::pi - 1e-3;

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool z_in_location(Setting s) { return s != Setting::II; }

double scale_parameter(const SimulationConfig& cfg, double z) {
  return std::max(cfg.sigma0 + cfg.gamma * z, kMinScale);
}

// Q + e*alpha^2*Q(1-Q) has derivative 1 + e*alpha^2*(1-2Q) in Q.
bool perturbation_safe(std::span<const double> q, double alpha) {
  const double a2 = alpha * alpha;
  for (double v : q)
    if (a2 * std::abs(1.0 - 2.0 * v) >= 1.0) return false;
  return true;
}

std::vector<double> draw_endpoint_values(const SimulationConfig& cfg, const std::vector<double>& q0,
                                         double z, double u, Philox& rng) {
  const double xi = location_mean(cfg, z, u);
  const double mu = xi + std::sqrt(cfg.nu1) * rng.normal();
  double sigma = 0.1;
  if (cfg.setting != Setting::I) {
    const double s = scale_parameter(cfg, z);
    do {
      sigma = rng.gamma(s * s / cfg.nu2, cfg.nu2 / s);
    } while (!(sigma >= 0.0));
  }
  std::vector<double> values(q0.size());
  for (std::size_t k = 0; k < q0.size(); ++k) values[k] = mu + sigma * q0[k];
  if (cfg.setting == Setting::IV) {
    static constexpr int kMaps[] = {-3, -2, -1, 1, 2, 3};
    const int k = kMaps[rng.uniform_int(0, 5)];
    for (double& v : values) v = transport_map(k, v);
  }
  return values;
}

}  // namespace

std::string_view to_string(Setting s) {
  switch (s) {
    case Setting::I: return "I";
    case Setting::II: return "II";
    case Setting::III: return "III";
    case Setting::IV: return "IV";
    case Setting::Sphere: return "SPHERE";
  }
  return "?";
}

std::string_view to_string(Design d) { return d == Design::sparse ? "sparse" : "dense"; }

Setting parse_setting(std::string_view name) {
  const auto u = upper(name);
  if (u == "I") return Setting::I;
  if (u == "II") return Setting::II;
  if (u == "III") return Setting::III;
  if (u == "IV") return Setting::IV;
  if (u == "SPHERE") return Setting::Sphere;
  throw StructuralError("unknown setting '" + std::string(name) + "'");
}

Design parse_design(std::string_view name) {
  const auto u = upper(name);
  if (u == "SPARSE") return Design::sparse;
  if (u == "DENSE") return Design::dense;
  throw StructuralError("unknown design '" + std::string(name) + "'");
}

void check_config(const SimulationConfig& cfg) {
  if (cfg.n < 2) throw DomainError("simulation needs n >= 2");
  const double max_alpha = cfg.setting == Setting::Sphere ? std::numbers::pi / 4 : 1.0;
  if (!(cfg.alpha >= 0.0 && cfg.alpha < max_alpha))
    throw DomainError("alpha must lie in [0, " + std::to_string(max_alpha) + ")");
  if (cfg.setting != Setting::Sphere && cfg.grid_size < 2)
    throw DomainError("grid size must be at least 2");
  if (!(cfg.nu1 >= 0.0) || !(cfg.nu2 > 0.0) || !(cfg.sphere_sigma2 >= 0.0))
    throw DomainError("variance parameters must be nonnegative");
}

SpaceKind simulation_space(const SimulationConfig& cfg) {
  return SpaceKind::wasserstein_midpoint(cfg.grid_size, -kSimSupport, kSimSupport);
}

std::vector<double> sample_times(Design design, Philox& rng) {
  const auto n_i = design == Design::dense ? 50 : rng.uniform_int(2, 5);
  std::vector<double> t(static_cast<std::size_t>(n_i));
  for (double& v : t) v = rng.uniform01();
  std::sort(t.begin(), t.end());
  return t;
}

std::vector<double> base_quantile(const SpaceKind& kind) {
  const auto& levels = kind.grid().levels;
  std::vector<double> q(levels.size());
  for (std::size_t k = 0; k < levels.size(); ++k) q[k] = truncnorm_quantile(0.0, 1.0, levels[k]);
  return q;
}

double transport_map(int k, double a) {
  if (k == 0) throw DomainError("transport map index must be nonzero");
  const double kp = std::numbers::pi * k;
  return a - std::sin(kp * a) / std::abs(kp);
}

double location_mean(const SimulationConfig& cfg, double z, double u) {
  return cfg.mu0 + (z_in_location(cfg.setting) ? cfg.beta1 * z : 0.0) + cfg.beta2 * u;
}

double scale_mean(const SimulationConfig& cfg, double z) {
  return cfg.setting == Setting::I ? 0.1 : scale_parameter(cfg, z);
}

ObjectPoint endpoint_mean(const SimulationConfig& cfg, const SpaceKind& kind, double z, double u) {
  const auto q0 = base_quantile(kind);
  const double xi = location_mean(cfg, z, u);
  const double s = scale_mean(cfg, z);
  std::vector<double> v(q0.size());
  for (std::size_t k = 0; k < q0.size(); ++k) v[k] = xi + s * q0[k];
  return wasserstein::make_quantile(kind, std::move(v));
}

ObjectPoint generate_endpoint(const SimulationConfig& cfg, const SpaceKind& kind, double z,
                              double u, Philox& rng) {
  if (cfg.setting == Setting::Sphere) throw StructuralError("sphere setting has no quantile endpoints");
  const auto q0 = base_quantile(kind);
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    auto v = draw_endpoint_values(cfg, q0, z, u, rng);
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    if (*lo < -kSimEndpointBound || *hi > kSimEndpointBound) continue;
    if (!perturbation_safe(v, cfg.alpha)) continue;
    return wasserstein::make_quantile(kind, std::move(v));
  }
  throw DomainError("could not draw an endpoint inside the simulation support");
}

ObjectPoint perturb_quantile(const ObjectPoint& q, double alpha, int sign) {
  if (q.tag() != SpaceTag::wasserstein1d) throw StructuralError("expected a quantile function");
  const double a2 = alpha * alpha * (sign >= 0 ? 1.0 : -1.0);
  std::vector<double> v(q.payload());
  for (double& x : v) x += a2 * x * (1.0 - x);
  ObjectPoint out(q.kind(), std::move(v));
  if (!validate(out))
    throw DomainError("perturbed quantile function is not monotone or leaves the support");
  return out;
}

ObjectPoint perturb_quantile(const ObjectPoint& q, double alpha, Philox& rng) {
  return perturb_quantile(q, alpha, rng.sign());
}

sphere::Vec3 sphere_regression(double z, double u) {
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double th = std::numbers::pi * u;
  return {r * std::cos(th), r * std::sin(th), z};
}

ObjectPoint perturb_sphere(const ObjectPoint& p, double alpha, int sign) {
  const sphere::Vec3 v = sphere::to_vec(p);
  const double phi = std::atan2(std::hypot(v(0), v(1)), v(2));
  const double theta = std::atan2(v(1), v(0));
  double eps = sign >= 0 ? alpha : -alpha;
  if (phi + eps < 0.0 || phi + eps > std::numbers::pi) eps = -eps;
  const double a = phi + eps;
  return sphere::from_vec(
      sphere::Vec3(std::sin(a) * std::cos(theta), std::sin(a) * std::sin(theta), std::cos(a)));
}

ObjectPoint perturb_sphere(const ObjectPoint& p, double alpha, Philox& rng) {
  return perturb_sphere(p, alpha, rng.sign());
}

Dataset generate_wasserstein_dataset(const SimulationConfig& cfg) {
  check_config(cfg);
  if (cfg.setting == Setting::Sphere) throw StructuralError("use generate_sphere_dataset");
  const SpaceKind kind = simulation_space(cfg);
  const Philox root(cfg.seed);
  Dataset ds{kind, {}, {}, cfg};
  ds.subjects.reserve(cfg.n);
  ds.truth.reserve(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    Philox latent = root.split(kLatentStream ^ i);
    Philox design = root.split(kDesignStream ^ i);
    Philox noise = root.split(kNoiseStream ^ i);
    const double z = 2.0 * latent.uniform01() - 1.0;
    GeodesicPair ends = cfg.random_effects
                            ? GeodesicPair(generate_endpoint(cfg, kind, z, 0.0, latent),
                                           generate_endpoint(cfg, kind, z, 1.0, latent))
                            : GeodesicPair(endpoint_mean(cfg, kind, z, 0.0),
                                           endpoint_mean(cfg, kind, z, 1.0));
    SubjectRecord rec;
    rec.id = "s" + std::to_string(i + 1);
    rec.z = Eigen::VectorXd::Constant(1, z);
    rec.times = sample_times(cfg.design, design);
    for (double t : rec.times) {
      ObjectPoint y = wasserstein::geodesic(ends.p0, ends.p1, t);
      if (cfg.alpha > 0.0) y = perturb_quantile(y, cfg.alpha, noise);
      rec.obs.push_back(std::move(y));
    }
    ds.subjects.push_back(std::move(rec));
    ds.truth.push_back(std::move(ends));
  }
  return ds;
}

Dataset generate_sphere_dataset(const SimulationConfig& cfg) {
  check_config(cfg);
  if (cfg.setting != Setting::Sphere) throw StructuralError("use generate_wasserstein_dataset");
  const SpaceKind kind = SpaceKind::sphere();
  const Philox root(cfg.seed);
  const double sd = std::sqrt(cfg.sphere_sigma2);
  Dataset ds{kind, {}, {}, cfg};
  ds.subjects.reserve(cfg.n);
  ds.truth.reserve(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i) {
    Philox latent = root.split(kLatentStream ^ i);
    Philox design = root.split(kDesignStream ^ i);
    Philox noise = root.split(kNoiseStream ^ i);
    const double z = latent.uniform01();

    // Tangent noise at zeta_{k,z} in the basis b1 = d/dpsi, b2 (psi = polar angle),
    // one C shared by both endpoints.
    auto endpoint = [&](double u, double c1, double c2) {
      const double psi = std::acos(z);
      const double th = std::numbers::pi * u;
      const sphere::Vec3 zeta = sphere_regression(z, u);
      const sphere::Vec3 b1(std::cos(psi) * std::cos(th), std::cos(psi) * std::sin(th),
                            -std::sin(psi));
      const sphere::Vec3 b2(std::sin(th), -std::cos(th), 0.0);
      const sphere::Vec3 a = c1 * b1 + c2 * b2;
      const double na = a.norm();
      if (na < 1e-12) return zeta;
      const sphere::Vec3 nu = std::cos(na) * zeta + std::sin(na) * (a / na);
      return sphere::Vec3(nu / nu.norm());
    };

    sphere::Vec3 nu0, nu1;
    int attempt = 0;
    for (;; ++attempt) {
      if (attempt == kMaxRedraws) throw DomainError("could not draw non-antipodal sphere endpoints");
      const double c1 = cfg.random_effects ? sd * latent.normal() : 0.0;
      const double c2 = cfg.random_effects ? sd * latent.normal() : 0.0;
      nu0 = endpoint(0.0, c1, c2);
      nu1 = endpoint(1.0, c1, c2);
      if (sphere::distance(nu0, nu1) < kSphereMaxEndpointAngle) break;
    }
    GeodesicPair ends(sphere::from_vec(nu0), sphere::from_vec(nu1));

    SubjectRecord rec;
    rec.id = "s" + std::to_string(i + 1);
    rec.z = Eigen::VectorXd::Constant(1, z);
    rec.times = sample_times(cfg.design, design);
    for (double t : rec.times) {
      ObjectPoint y = sphere::from_vec(sphere::geodesic(nu0, nu1, t));
      if (cfg.alpha > 0.0) y = perturb_sphere(y, cfg.alpha, noise);
      rec.obs.push_back(std::move(y));
    }
    ds.subjects.push_back(std::move(rec));
    ds.truth.push_back(std::move(ends));
  }
  return ds;
}

Dataset generate_dataset(const SimulationConfig& cfg) {
  return cfg.setting == Setting::Sphere ? generate_sphere_dataset(cfg)
                                        : generate_wasserstein_dataset(cfg);
}

GeodesicPair population_endpoints(const SimulationConfig& cfg, const SpaceKind& kind, double z) {
  if (cfg.setting == Setting::Sphere)
    return GeodesicPair(sphere::from_vec(sphere_regression(z, 0.0)),
                        sphere::from_vec(sphere_regression(z, 1.0)));
  return GeodesicPair(endpoint_mean(cfg, kind, z, 0.0), endpoint_mean(cfg, kind, z, 1.0));
}

ObjectPoint population_truth(const SimulationConfig& cfg, const SpaceKind& kind, double t,
                             double z) {
  const auto ends = population_endpoints(cfg, kind, z);
  return geodesic_point(ends.p0, ends.p1, t);
}

std::pair<double, double> covariate_range(Setting s) {
  return s == Setting::Sphere ? std::pair{0.0, 1.0} : std::pair{-1.0, 1.0};
}

}  // namespace geomix
