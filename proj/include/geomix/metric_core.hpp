#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace geomix {

/// Tolerance for membership checks (monotonicity, symmetry, unit norm).
inline constexpr double kInvariantTol = 1e-9;
/// Tolerance for geodesic identities (constant speed, endpoint recovery).
inline constexpr double kGeodesicTol = 1e-7;

enum class SpaceTag { euclidean1d, wasserstein1d, spd, sphere };

std::string_view to_string(SpaceTag tag);
/// Throws StructuralError on an unknown name.
SpaceTag parse_space_tag(std::string_view name);

/// Shared probability grid and support of a Wasserstein space.
struct QuantileGrid {
  std::vector<double> levels;  // strictly increasing in (0,1)
  double lo = 0.0;
  double hi = 1.0;
};

/// Tag plus the parameters of one concrete geodesic space. Cheap to copy: the
/// Wasserstein grid is shared between all points of a space.
class SpaceKind {
 public:
  static SpaceKind euclidean1d();
  /// Throws StructuralError unless the grid is strictly increasing in (0,1) and lo < hi.
  static SpaceKind wasserstein(std::vector<double> levels, double lo = 0.0, double hi = 1.0);
  /// Midpoint grid (k - 0.5)/G, k = 1..G.
  static SpaceKind wasserstein_midpoint(std::size_t grid_size = 100, double lo = 0.0,
                                        double hi = 1.0);
  /// Power-Euclidean SPD space of dim x dim matrices, power in (0,1].
  static SpaceKind spd(int dim, double power = 0.5);
  static SpaceKind sphere();

  SpaceTag tag() const noexcept { return tag_; }
  std::size_t payload_size() const noexcept;

  // Wasserstein parameters; StructuralError for other tags.
  const QuantileGrid& grid() const;
  // SPD parameters.
  int dim() const noexcept { return dim_; }
  double power() const noexcept { return power_; }

  friend bool operator==(const SpaceKind& a, const SpaceKind& b);

 private:
  SpaceTag tag_ = SpaceTag::euclidean1d;
  std::shared_ptr<const QuantileGrid> grid_;
  int dim_ = 1;
  double power_ = 1.0;
};

/// Element of a geodesic space: a kind tag plus a flat payload
/// (G quantile values, K*K row-major matrix entries, 3 sphere coordinates, or 1 real).
class ObjectPoint {
 public:
  /// Throws StructuralError when the payload length does not match the kind.
  ObjectPoint(SpaceKind kind, std::vector<double> payload);

  const SpaceKind& kind() const noexcept { return kind_; }
  SpaceTag tag() const noexcept { return kind_.tag(); }
  const std::vector<double>& payload() const noexcept { return payload_; }
  double operator[](std::size_t i) const { return payload_[i]; }

 private:
  SpaceKind kind_;
  std::vector<double> payload_;
};

/// Endpoints (gamma(0), gamma(1)) of a geodesic; an element of the product space.
struct GeodesicPair {
  GeodesicPair(ObjectPoint start, ObjectPoint end);

  ObjectPoint p0;
  ObjectPoint p1;
};

/// Diagnostics from a weighted Fréchet mean solve.
struct SolverInfo {
  int iterations = 0;
  double grad_norm = 0.0;
  bool converged = true;
  /// Signed weights pushed the unconstrained average out of the space and it was
  /// projected back (isotonic pooling, support clipping, eigenvalue floor).
  bool projected = false;
};

struct MeanResult {
  ObjectPoint point;
  SolverInfo info;
};

/// True iff the space invariants hold within kInvariantTol.
bool validate(const ObjectPoint& p);

double dist(const ObjectPoint& a, const ObjectPoint& b);

/// Constant-speed geodesic from a (t = 0) to b (t = 1); t outside [0,1] extends it
/// where the space allows, otherwise DomainError.
ObjectPoint geodesic_point(const ObjectPoint& a, const ObjectPoint& b, double t);

/// argmin_mu sum_j weights_j * d^2(mu, points_j). Weights may be negative as long as
/// their sum is positive.
MeanResult weighted_frechet_mean_info(std::span<const ObjectPoint> points,
                                      std::span<const double> weights);
ObjectPoint weighted_frechet_mean(std::span<const ObjectPoint> points,
                                  std::span<const double> weights);

/// sqrt(d^2(u.p0, v.p0) + d^2(u.p1, v.p1)).
double product_dist(const GeodesicPair& u, const GeodesicPair& v);

// Shared precondition checks used by every space module.
void require_same_kind(const ObjectPoint& a, const ObjectPoint& b);
void require_mean_inputs(std::span<const ObjectPoint> points, std::span<const double> weights);
double weight_sum(std::span<const double> weights);

}  // namespace geomix
