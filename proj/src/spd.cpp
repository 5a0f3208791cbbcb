#include "geomix/spd.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "geomix/error.hpp"

namespace geomix::spd {

namespace {

void require_spd(const ObjectPoint& p) {
  if (p.tag() != SpaceTag::spd) throw StructuralError("expected an spd point");
}

void require_same_shape(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw StructuralError("SPD matrices must be square and of equal dimension");
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

// Root-space combination back to the cone; eigenvalues below the floor are a
// domain violation for geodesic extensions.
Eigen::MatrixXd from_root_space(const Eigen::MatrixXd& root, double alpha, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrize(root));
  if (eig.info() != Eigen::Success) throw DomainError("eigendecomposition failed");
  if (eig.eigenvalues().minCoeff() < kEigFloor) {
    throw DomainError("SPD geodesic at t=" + std::to_string(t) + " leaves the PD cone");
  }
  const Eigen::VectorXd lam = eig.eigenvalues().array().pow(1.0 / alpha);
  return eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

Eigen::MatrixXd to_matrix(const ObjectPoint& p) {
  require_spd(p);
  const int k = p.kind().dim();
  Eigen::MatrixXd m(k, k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) m(r, c) = p[static_cast<std::size_t>(r * k + c)];
  return m;
}

ObjectPoint from_matrix(const SpaceKind& kind, const Eigen::MatrixXd& m) {
  if (kind.tag() != SpaceTag::spd) throw StructuralError("expected an spd space");
  if (m.rows() != kind.dim() || m.cols() != kind.dim())
    throw StructuralError("matrix dimension does not match the SPD space");
  std::vector<double> payload(static_cast<std::size_t>(m.size()));
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) payload[static_cast<std::size_t>(r * m.cols() + c)] = m(r, c);
  return ObjectPoint(kind, std::move(payload));
}

Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& a, double alpha) {
  if (a.rows() != a.cols()) throw StructuralError("matrix power of a non-square matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrize(a));
  if (eig.info() != Eigen::Success) throw DomainError("eigendecomposition failed");
  Eigen::VectorXd lam = eig.eigenvalues();
  const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) < 0.0) {
      if (lam(i) < -1e-12 * scale) throw DomainError("matrix power of an indefinite matrix");
      lam(i) = 0.0;
    }
    lam(i) = std::pow(lam(i), alpha);
  }
  return eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
}

double power_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double alpha) {
  require_same_shape(a, b);
  return (matrix_power(a, alpha) - matrix_power(b, alpha)).norm() / alpha;
}

Eigen::MatrixXd geodesic(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double t,
                         double alpha) {
  require_same_shape(a, b);
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  const Eigen::MatrixXd root = (1.0 - t) * matrix_power(a, alpha) + t * matrix_power(b, alpha);
  return from_root_space(root, alpha, t);
}

SpdMean weighted_mean(std::span<const Eigen::MatrixXd> points, std::span<const double> weights,
                      double alpha) {
  if (points.empty()) throw StructuralError("Fréchet mean of an empty set");
  if (points.size() != weights.size())
    throw StructuralError("points and weights differ in length");
  const double total = weight_sum(weights);
  if (!(total > 0.0)) throw DegenerateWeightsError("sum of Fréchet weights is not positive");

  Eigen::MatrixXd root = Eigen::MatrixXd::Zero(points.front().rows(), points.front().cols());
  for (std::size_t j = 0; j < points.size(); ++j) {
    require_same_shape(points.front(), points[j]);
    root += weights[j] * matrix_power(points[j], alpha);
  }
  root = symmetrize(root / total);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(root);
  if (eig.info() != Eigen::Success) throw DomainError("eigendecomposition failed");
  Eigen::VectorXd lam = eig.eigenvalues();
  SpdMean out;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) < kEigFloor) {
      lam(i) = kEigFloor;
      out.clipped = true;
    }
    lam(i) = std::pow(lam(i), 1.0 / alpha);
  }
  out.mean = eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
  out.mean = symmetrize(out.mean);
  return out;
}

double distance(const ObjectPoint& a, const ObjectPoint& b) {
  require_spd(a);
  require_same_kind(a, b);
  return power_distance(to_matrix(a), to_matrix(b), a.kind().power());
}

ObjectPoint geodesic(const ObjectPoint& a, const ObjectPoint& b, double t) {
  require_spd(a);
  require_same_kind(a, b);
  return from_matrix(a.kind(), geodesic(to_matrix(a), to_matrix(b), t, a.kind().power()));
}

MeanResult weighted_mean(std::span<const ObjectPoint> points, std::span<const double> weights) {
  require_mean_inputs(points, weights);
  require_spd(points.front());
  std::vector<Eigen::MatrixXd> mats;
  mats.reserve(points.size());
  for (const auto& p : points) mats.push_back(to_matrix(p));
  const auto& kind = points.front().kind();
  auto res = weighted_mean(mats, weights, kind.power());
  SolverInfo info;
  info.projected = res.clipped;
  return {from_matrix(kind, res.mean), info};
}

bool is_valid(const ObjectPoint& p) {
  require_spd(p);
  for (double v : p.payload())
    if (!std::isfinite(v)) return false;
  const Eigen::MatrixXd m = to_matrix(p);
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kInvariantTol) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(symmetrize(m), Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) return false;
  return eig.eigenvalues().minCoeff() >= -kInvariantTol;
}

}  // namespace geomix::spd
