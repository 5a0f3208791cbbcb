#pragma once

// Synthetic longitudinal object data: Wasserstein settings I-IV and the sphere model.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geomix/metric_core.hpp"
#include "geomix/mixed_effects.hpp"
#include "geomix/random.hpp"
#include "geomix/sphere.hpp"

namespace geomix {

enum class Setting { I, II, III, IV, Sphere };
enum class Design { sparse, dense };

std::string_view to_string(Setting s);
std::string_view to_string(Design d);
/// "I".."IV", "SPHERE" (case-insensitive). StructuralError otherwise.
Setting parse_setting(std::string_view name);
Design parse_design(std::string_view name);

struct SimulationConfig {
  Setting setting = Setting::I;
  std::size_t n = 50;
  Design design = Design::sparse;
  double alpha = 0.1;  // 0 turns the observation perturbation off
  std::uint64_t seed = 0;
  std::size_t grid_size = 100;
  /// false: every endpoint equals its conditional Fréchet mean (no random effect).
  bool random_effects = true;

  double mu0 = 0.0;
  double sigma0 = 0.1;
  double beta1 = 0.3;
  double beta2 = 0.25;
  double gamma = 0.3;
  double nu1 = 0.25;
  double nu2 = 1.0;
  double sphere_sigma2 = 0.2;
};

/// Throws DomainError for n < 2, alpha outside [0,1) (sphere: [0, pi/4)) or grid_size < 2.
void check_config(const SimulationConfig& cfg);

struct Dataset {
  SpaceKind kind;
  std::vector<SubjectRecord> subjects;
  /// Unperturbed endpoints per subject (empty when unknown).
  std::vector<GeodesicPair> truth;
  /// Generating configuration, when the data came from `simulate`.
  std::optional<SimulationConfig> simulation;
};

// Support of simulated Wasserstein data, and the window endpoint draws must stay in.
inline constexpr double kSimSupport = 50.0;
inline constexpr double kSimEndpointBound = 20.0;

/// Wasserstein space used for simulated data: midpoint grid, support [-50, 50].
SpaceKind simulation_space(const SimulationConfig& cfg);

/// Sparse: n_i uniform on {2,...,5}; dense: n_i = 50. Times iid U(0,1), sorted.
std::vector<double> sample_times(Design design, Philox& rng);

/// Quantiles of N(0,1) truncated to [0,1] on the grid levels.
std::vector<double> base_quantile(const SpaceKind& kind);

/// T_k(a) = a - sin(pi k a)/|k pi|, nondecreasing on the whole line.
double transport_map(int k, double a);

/// Mean parameter xi_{u,z} and E[sigma_Y | z] for a Wasserstein setting.
double location_mean(const SimulationConfig& cfg, double z, double u);
double scale_mean(const SimulationConfig& cfg, double z);

/// Endpoint quantile function at u in {0,1}:
///   Q = mu_Y + sigma_Y * q0,  mu_Y ~ N(xi_{u,z}, nu1),
///   sigma_Y = 0.1 (I) or Gamma(s^2/nu2, scale nu2/s) with s = sigma0 + gamma z (II-IV),
/// Setting IV then pushes Q through T_k with k uniform on {+-1, +-2, +-3}.
/// Draws leaving [-20, 20] or too steep for the perturbation at cfg.alpha are redrawn.
ObjectPoint generate_endpoint(const SimulationConfig& cfg, const SpaceKind& kind, double z,
                              double u, Philox& rng);

/// Conditional Fréchet mean xi_{u,z} + E[sigma|z] q0.
ObjectPoint endpoint_mean(const SimulationConfig& cfg, const SpaceKind& kind, double z, double u);

/// Q + e * alpha^2 * Q (1 - Q), e = +-1 with probability 1/2.
/// DomainError if the result is not monotone or leaves the support.
ObjectPoint perturb_quantile(const ObjectPoint& q, double alpha, Philox& rng);
/// Same with a fixed sign.
ObjectPoint perturb_quantile(const ObjectPoint& q, double alpha, int sign);

/// zeta_{u,z} = (sqrt(1-z^2) cos(pi u), sqrt(1-z^2) sin(pi u), z).
sphere::Vec3 sphere_regression(double z, double u);

/// Rotates P by eps = +-alpha along its meridian; flips eps when phi + eps leaves [0, pi].
ObjectPoint perturb_sphere(const ObjectPoint& p, double alpha, Philox& rng);
ObjectPoint perturb_sphere(const ObjectPoint& p, double alpha, int sign);

Dataset generate_wasserstein_dataset(const SimulationConfig& cfg);
Dataset generate_sphere_dataset(const SimulationConfig& cfg);
/// Dispatches on cfg.setting.
Dataset generate_dataset(const SimulationConfig& cfg);

/// Population truth at (t, z): geodesic between the conditional Fréchet means of the
/// two endpoints.
ObjectPoint population_truth(const SimulationConfig& cfg, const SpaceKind& kind, double t,
                             double z);
GeodesicPair population_endpoints(const SimulationConfig& cfg, const SpaceKind& kind, double z);

/// Covariate range of the generating model: (-1, 1) for Wasserstein settings, (0, 1) for
/// the sphere.
std::pair<double, double> covariate_range(Setting s);

}  // namespace geomix
