#include "tomorisk/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace tomorisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rank-one threshold on the smaller eigenvalue, equivalent to is_pure() on the Bloch norm.
constexpr double kRankOneEigenvalue = 0.5 * kPureTolerance;

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

double neg_entropy_from_norm(double r) {
  return xlogx(0.5 * (1.0 + r)) + xlogx(0.5 * (1.0 - r));
}

double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

// 1 - |r|^2, with rounding-level values read as exactly zero. The infidelity takes a square
// root of this factor, which would otherwise turn 1e-16 of noise on a pure state into 1e-8.
constexpr double kMixednessFloor = 64.0 * std::numeric_limits<double>::epsilon();
double mixedness(double one_minus_r2) { return one_minus_r2 < kMixednessFloor ? 0.0 : one_minus_r2; }

}  // namespace

std::string_view loss_name(LossKind kind) noexcept {
  switch (kind) {
    case LossKind::HilbertSchmidt: return "hs";
    case LossKind::RelativeEntropy: return "relent";
    case LossKind::Infidelity: return "infid";
  }
  return "?";
}

LossKind parse_loss(std::string_view name) {
  if (name == "hs") return LossKind::HilbertSchmidt;
  if (name == "relent") return LossKind::RelativeEntropy;
  if (name == "infid") return LossKind::Infidelity;
  throw InvalidParameter("unknown loss '" + std::string(name) + "' (expected hs|relent|infid)");
}

double hs_loss(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return (rho.matrix() - sigma.matrix()).squaredNorm();
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  using Solver = Eigen::SelfAdjointEigenSolver<DensityMatrix::Matrix>;
  const Solver rho_eig(rho.matrix(), Eigen::EigenvaluesOnly);
  const Solver sigma_eig(sigma.matrix());

  double neg_entropy = 0.0;
  for (int i = 0; i < 2; ++i) neg_entropy += xlogx(std::max(0.0, rho_eig.eigenvalues()(i)));

  // Eigenvalues come back in ascending order.
  const auto& vecs = sigma_eig.eigenvectors();
  const auto& lams = sigma_eig.eigenvalues();
  double cross = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double weight = (vecs.col(i).adjoint() * rho.matrix() * vecs.col(i))(0, 0).real();
    if (i == 0 && lams(0) <= kRankOneEigenvalue) {
      if (weight > kPureTolerance) return kInf;
      continue;
    }
    cross += weight * std::log(lams(i));
  }
  return std::max(0.0, neg_entropy - cross);
}

double infidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const auto& a = rho.matrix();
  const auto& b = sigma.matrix();
  const double overlap = (a * b).trace().real();
  // det rho = (1 - |r|^2) / 4.
  const double det_product = 0.0625 * mixedness(4.0 * a.determinant().real()) * mixedness(4.0 * b.determinant().real());
  return 1.0 - std::sqrt(clamp_unit(overlap + 2.0 * std::sqrt(det_product)));
}

double loss(LossKind kind, const DensityMatrix& rho, const DensityMatrix& sigma) {
  switch (kind) {
    case LossKind::HilbertSchmidt: return hs_loss(rho, sigma);
    case LossKind::RelativeEntropy: return relative_entropy(rho, sigma);
    case LossKind::Infidelity: return infidelity(rho, sigma);
  }
  throw InvalidParameter("unknown loss kind");
}

double hs_loss(const BlochVector& truth, const BlochVector& estimate) noexcept {
  const auto a = truth.xyz();
  const auto b = estimate.xyz();
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return 0.5 * (dx * dx + dy * dy + dz * dz);
}

double relative_entropy(const BlochVector& truth, const BlochVector& estimate) {
  if (!truth.is_valid_state() || !estimate.is_valid_state()) {
    throw InvalidState("relative entropy needs valid states");
  }
  const auto r = truth.xyz();
  const auto s = estimate.xyz();
  const double r_norm = std::min(1.0, truth.norm());
  const double s_norm = std::min(1.0, estimate.norm());
  const double neg_entropy = neg_entropy_from_norm(r_norm);

  const double lam_hi = 0.5 * (1.0 + s_norm);
  const double lam_lo = 0.5 * (1.0 - s_norm);
  // Projection of r onto the eigenbasis of sigma: weight of rho on the larger eigenvector.
  const double r_along = s_norm > 0.0 ? dot3(r, s) / estimate.norm() : 0.0;
  const double weight_hi = 0.5 * (1.0 + r_along);
  const double weight_lo = 0.5 * (1.0 - r_along);

  if (lam_lo <= kRankOneEigenvalue) {
    if (weight_lo > kPureTolerance) return kInf;
    return std::max(0.0, neg_entropy - weight_hi * std::log(lam_hi));
  }
  const double cross = weight_hi * std::log(lam_hi) + weight_lo * std::log(lam_lo);
  return std::max(0.0, neg_entropy - cross);
}

double infidelity(const BlochVector& truth, const BlochVector& estimate) {
  if (!truth.is_valid_state() || !estimate.is_valid_state()) {
    throw InvalidState("infidelity needs valid states");
  }
  const double overlap = dot3(truth.xyz(), estimate.xyz());
  const double both = mixedness(1.0 - truth.norm_squared()) * mixedness(1.0 - estimate.norm_squared());
  return 1.0 - std::sqrt(clamp_unit(0.5 * (1.0 + overlap + std::sqrt(both))));
}

double loss(LossKind kind, const BlochVector& truth, const BlochVector& estimate) {
  switch (kind) {
    case LossKind::HilbertSchmidt: return hs_loss(truth, estimate);
    case LossKind::RelativeEntropy: return relative_entropy(truth, estimate);
    case LossKind::Infidelity: return infidelity(truth, estimate);
  }
  throw InvalidParameter("unknown loss kind");
}

}  // namespace tomorisk
