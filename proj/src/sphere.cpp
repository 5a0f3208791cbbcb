#include "geomix/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "geomix/error.hpp"

namespace geomix::sphere {

namespace {

constexpr double kStallGradTol = 1e-7;
constexpr int kMaxHalvings = 60;

void require_sphere(const ObjectPoint& p) {
  if (p.tag() != SpaceTag::sphere) throw StructuralError("expected a sphere point");
}

double abs_weight_sum(std::span<const double> weights) {
  double s = 0.0;
  for (double w : weights) s += std::abs(w);
  return s;
}

// x cot x, with the removable singularity at 0.
double x_cot_x(double x) {
  if (x < 1e-8) return 1.0;
  return x * std::cos(x) / std::sin(x);
}

// Orthonormal basis (e1, e2) of the tangent plane at mu.
void tangent_basis(const Vec3& mu, Vec3& e1, Vec3& e2) {
  Eigen::Index axis = 0;
  mu.cwiseAbs().minCoeff(&axis);
  Vec3 a = Vec3::Zero();
  a(axis) = 1.0;
  e1 = (a - a.dot(mu) * mu).normalized();
  e2 = mu.cross(e1);
}

// Points this close to the antipode of mu have no usable logarithm; their term is
// not differentiable there and is left out of the local model.
constexpr double kCutLocusTol = 1e-8;

bool on_cut_locus(const Vec3& mu, const Vec3& x) {
  return std::numbers::pi - std::atan2(mu.cross(x).norm(), mu.dot(x)) < kCutLocusTol;
}

// Tangent-plane coordinates of g = sum_j w_j log_mu(x_j) (= -grad F / 2) and of the
// Hessian of F/2, skipping cut-locus terms.
void tangent_model(const Vec3& mu, std::span<const Vec3> points, std::span<const double> weights,
                   Eigen::Vector2d& g, Eigen::Matrix2d& h, Vec3& e1, Vec3& e2) {
  tangent_basis(mu, e1, e2);
  g.setZero();
  h.setZero();
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (on_cut_locus(mu, points[j])) continue;
    const Vec3 lg = log_map(mu, points[j]);
    const Eigen::Vector2d l(lg.dot(e1), lg.dot(e2));
    const double d = l.norm();
    g += weights[j] * l;
    if (d < 1e-12) {
      h += weights[j] * Eigen::Matrix2d::Identity();
    } else {
      const Eigen::Vector2d u = l / d;
      const Eigen::Matrix2d uu = u * u.transpose();
      h += weights[j] * (uu + x_cot_x(d) * (Eigen::Matrix2d::Identity() - uu));
    }
  }
}

// At c, the points on its cut locus contribute W * (pi - rho)^2 ~ W pi^2 - 2 pi W rho
// at distance rho from c, a cone with slope 2 pi |W| when W < 0. The remaining smooth
// part has slope at most ||grad||, so c is a strict local minimum when that is smaller.
bool cusp_is_local_min(const Vec3& c, std::span<const Vec3> points, std::span<const double> weights) {
  double w_cut = 0.0;
  for (std::size_t j = 0; j < points.size(); ++j)
    if (on_cut_locus(c, points[j])) w_cut += weights[j];
  if (!(w_cut < 0.0)) return false;
  Eigen::Vector2d g;
  Eigen::Matrix2d h;
  Vec3 e1, e2;
  tangent_model(c, points, weights, g, h, e1, e2);
  return 2.0 * g.norm() < 2.0 * std::numbers::pi * std::abs(w_cut);
}

}  // namespace

Vec3 to_vec(const ObjectPoint& p) {
  require_sphere(p);
  return Vec3(p[0], p[1], p[2]);
}

ObjectPoint from_vec(const Vec3& v) { return ObjectPoint(SpaceKind::sphere(), {v(0), v(1), v(2)}); }

ObjectPoint make_point(const Vec3& v) {
  const double n = v.norm();
  if (!(n > 1e-12)) throw DomainError("cannot normalise a zero vector onto the sphere");
  return from_vec(v / n);
}

double distance(const Vec3& x, const Vec3& y) {
  // Equal to arccos(clamp(<x,y>)) for unit vectors, without its loss of precision
  // near 0 and pi.
  return std::atan2(x.cross(y).norm(), x.dot(y));
}

Vec3 log_map(const Vec3& base, const Vec3& x) {
  const double c = std::clamp(base.dot(x), -1.0, 1.0);
  const Vec3 v = x - c * base;
  const double nv = v.norm();
  const double d = std::atan2(nv, c);
  if (nv < 1e-300) {
    if (c > 0.0) return Vec3::Zero();
    throw DomainError("logarithm at an antipodal point is undefined");
  }
  if (std::numbers::pi - d < 1e-12) throw DomainError("logarithm at an antipodal point is undefined");
  return v * (d / nv);
}

Vec3 exp_map(const Vec3& base, const Vec3& v) {
  const double n = v.norm();
  if (n < 1e-300) return base;
  const Vec3 out = std::cos(n) * base + std::sin(n) * (v / n);
  return out / out.norm();
}

Vec3 geodesic(const Vec3& x, const Vec3& y, double t) {
  const double omega = distance(x, y);
  if (omega < kMinAngle) {
    const Vec3 chord = (1.0 - t) * x + t * y;
    return chord / chord.norm();
  }
  if (omega > std::numbers::pi - kMinAngle)
    throw DomainError("points are (nearly) antipodal: the geodesic is not unique");
  if (t == 0.0) return x;
  if (t == 1.0) return y;
  return (std::sin((1.0 - t) * omega) * x + std::sin(t * omega) * y) / std::sin(omega);
}

double objective(const Vec3& mu, std::span<const Vec3> points, std::span<const double> weights) {
  double f = 0.0;
  for (std::size_t j = 0; j < points.size(); ++j) {
    const double d = distance(mu, points[j]);
    f += weights[j] * d * d;
  }
  return f;
}

Vec3 gradient(const Vec3& mu, std::span<const Vec3> points, std::span<const double> weights) {
  Vec3 g = Vec3::Zero();
  for (std::size_t j = 0; j < points.size(); ++j) g += weights[j] * log_map(mu, points[j]);
  return -2.0 * g;
}

SphereMean weighted_mean(std::span<const Vec3> points, std::span<const double> weights) {
  if (points.empty()) throw StructuralError("Fréchet mean of an empty set");
  if (points.size() != weights.size())
    throw StructuralError("points and weights differ in length");
  const double total = weight_sum(weights);
  if (!(total > 0.0)) throw DegenerateWeightsError("sum of Fréchet weights is not positive");
  const double abs_total = abs_weight_sum(weights);

  Vec3 mu = Vec3::Zero();
  for (std::size_t j = 0; j < points.size(); ++j) mu += weights[j] * points[j];
  if (mu.norm() < 1e-8) {
    const auto best = std::max_element(weights.begin(), weights.end()) - weights.begin();
    mu = points[static_cast<std::size_t>(best)];
  }
  mu.normalize();

  double f = objective(mu, points, weights);
  double grad_norm = 0.0;
  int iter = 0;
  for (; iter < kMaxIterations; ++iter) {
    Eigen::Vector2d g;
    Eigen::Matrix2d h;
    Vec3 e1, e2;
    tangent_model(mu, points, weights, g, h, e1, e2);
    grad_norm = g.norm() / abs_total;
    if (grad_norm <= kGradTol) break;

    Eigen::Vector2d step = g / total;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(h);
    if (eig.eigenvalues().minCoeff() > 1e-10 * abs_total) step = h.ldlt().solve(g);

    const Vec3 dir = step(0) * e1 + step(1) * e2;
    // Near the optimum the decrease in F drops below its rounding error; a step that
    // leaves F unchanged to rounding is then judged by the gradient instead.
    double scale = 0.0;
    for (std::size_t j = 0; j < points.size(); ++j) {
      const double d = distance(mu, points[j]);
      scale += std::abs(weights[j]) * d * d;
    }
    const double f_noise = 64.0 * std::numeric_limits<double>::epsilon() * (scale + 1.0);
    bool accepted = false;
    double eta = 1.0;
    for (int halving = 0; halving <= kMaxHalvings; ++halving, eta *= 0.5) {
      const Vec3 cand = exp_map(mu, eta * dir);
      const double fc = objective(cand, points, weights);
      bool take = fc < f;
      if (!take && fc <= f + f_noise) {
        Eigen::Vector2d gc;
        Eigen::Matrix2d hc;
        Vec3 c1, c2;
        tangent_model(cand, points, weights, gc, hc, c1, c2);
        take = gc.norm() / abs_total < grad_norm;
      }
      if (take) {
        mu = cand;
        f = fc;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }

  {
    Eigen::Vector2d g;
    Eigen::Matrix2d h;
    Vec3 e1, e2;
    tangent_model(mu, points, weights, g, h, e1, e2);
    grad_norm = g.norm() / abs_total;
  }

  SphereMean out;
  bool have = false;
  if (grad_norm <= kStallGradTol) {
    out.mean = mu;
    out.info.iterations = iter;
    out.info.grad_norm = grad_norm;
    out.info.converged = grad_norm <= kGradTol;
    have = true;
  }

  // Signed weights can put the minimum on the cut locus of a negatively weighted point,
  // where -|w| d^2 has a cone-shaped minimum and the smooth iteration cannot converge.
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (!(weights[j] < 0.0)) continue;
    const Vec3 c = -points[j];
    const double fc = objective(c, points, weights);
    if (have && !(fc < objective(out.mean, points, weights))) continue;
    if (!cusp_is_local_min(c, points, weights)) continue;
    out.mean = c;
    out.info.iterations = iter;
    out.info.grad_norm = 0.0;  // 0 lies in the subdifferential
    out.info.converged = true;
    have = true;
  }
  if (!have) {
    throw ConvergenceError("sphere Fréchet mean did not converge (gradient " +
                               std::to_string(grad_norm) + " after " + std::to_string(iter) +
                               " iterations)",
                           iter);
  }
  return out;
}

double distance(const ObjectPoint& a, const ObjectPoint& b) {
  require_sphere(a);
  require_same_kind(a, b);
  return distance(to_vec(a), to_vec(b));
}

ObjectPoint geodesic(const ObjectPoint& a, const ObjectPoint& b, double t) {
  require_sphere(a);
  require_same_kind(a, b);
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  return from_vec(geodesic(to_vec(a), to_vec(b), t));
}

MeanResult weighted_mean(std::span<const ObjectPoint> points, std::span<const double> weights) {
  require_mean_inputs(points, weights);
  require_sphere(points.front());
  std::vector<Vec3> vecs;
  vecs.reserve(points.size());
  for (const auto& p : points) vecs.push_back(to_vec(p));
  auto res = weighted_mean(vecs, weights);
  return {from_vec(res.mean), res.info};
}

bool is_valid(const ObjectPoint& p) {
  require_sphere(p);
  const Vec3 v = to_vec(p);
  if (!v.allFinite()) return false;
  return std::abs(v.norm() - 1.0) <= kInvariantTol;
}

}  // namespace geomix::sphere
