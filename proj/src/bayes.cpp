#include "tomorisk/bayes.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "tomorisk/risk.hpp"

namespace tomorisk {

PriorGrid::PriorGrid(std::vector<BlochVector> points, std::vector<double> weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.empty()) throw InvalidParameter("a prior needs at least one point");
  if (points_.size() != weights_.size()) throw InvalidParameter("points and weights differ in length");
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidParameter("weights must be finite and nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidParameter("weights sum to " + std::to_string(total));
  for (const auto& p : points_) {
    if (p.dim() != points_.front().dim()) throw InvalidState("prior points differ in dimension");
    if (!p.is_valid_state()) throw InvalidState("prior point " + to_string(p) + " is outside the ball");
  }
}

PriorGrid PriorGrid::uniform(std::vector<BlochVector> points) {
  const std::size_t n = points.size();
  if (n == 0) throw InvalidParameter("a prior needs at least one point");
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  // Absorb the rounding so that the sum check sees exactly one point's worth of slack.
  w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
  return {std::move(points), std::move(w)};
}

PriorGrid posterior(const PriorGrid& prior, const Dataset& d, const MeasurementDesign& design) {
  std::vector<double> w(prior.size());
  double total = 0.0;
  for (std::size_t j = 0; j < prior.size(); ++j) {
    w[j] = prior.weights()[j] * dataset_probability(d, prior.points()[j], design);
    total += w[j];
  }
  if (!(total > 0.0)) throw ImpossibleData("no prior point can produce the observed counts");
  for (double& x : w) x /= total;
  return {prior.points(), std::move(w)};
}

BlochVector posterior_mean(const PriorGrid& post) {
  const int dim = post.points().front().dim();
  std::array<double, 3> mean{};
  for (std::size_t j = 0; j < post.size(); ++j) {
    for (int i = 0; i < dim; ++i) mean[static_cast<std::size_t>(i)] += post.weights()[j] * post.points()[j][i];
  }
  return BlochVector(std::span<const double>(mean.data(), static_cast<std::size_t>(dim)));
}

double posterior_loss(const PriorGrid& post, LossKind kind, const BlochVector& candidate) {
  double total = 0.0;
  for (std::size_t j = 0; j < post.size(); ++j) {
    const double w = post.weights()[j];
    if (w == 0.0) continue;
    total += w * loss(kind, post.points()[j], candidate);
  }
  return total;
}

BlochVector bayes_estimate_grid(const PriorGrid& post, LossKind kind, const std::vector<BlochVector>& candidates) {
  if (candidates.empty()) throw InvalidParameter("no candidates");
  std::size_t best = candidates.size();
  double best_loss = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const double value = posterior_loss(post, kind, candidates[c]);
    if (value < best_loss) {
      best_loss = value;
      best = c;
    }
  }
  if (best == candidates.size()) throw DegenerateLoss("every candidate has infinite posterior loss");
  return candidates[best];
}

Purity purity_certificate(const BlochVector& estimate) noexcept {
  return is_pure(estimate) ? Purity::Pure : Purity::Mixed;
}

std::string_view purity_name(Purity p) noexcept { return p == Purity::Pure ? "pure" : "mixed"; }

std::vector<BlochVector> candidate_grid(int dim, const CandidateGridSpec& spec) {
  if (dim != 2 && dim != 3) throw InvalidParameter("candidate grids are 2- or 3-dimensional");
  if (!(spec.radial_step > 0.0 && spec.radial_step <= 1.0)) throw InvalidParameter("radial step must lie in (0, 1]");

  std::vector<double> radii = linear_grid(spec.radial_step, 1.0, spec.radial_step);
  if (radii.back() < 1.0) radii.push_back(1.0);
  radii.pop_back();
  for (int k = 3; k <= spec.boundary_refinement; ++k) {
    const double r = 1.0 - std::pow(10.0, -k);
    if (r > radii.back()) radii.push_back(r);
  }
  radii.push_back(1.0);

  std::vector<std::array<double, 3>> directions;
  if (dim == 2) {
    if (!(spec.angular_step_deg > 0.0)) throw InvalidParameter("angular step must be positive");
    for (std::size_t k = 0;; ++k) {
      const double deg = static_cast<double>(k) * spec.angular_step_deg;
      if (deg >= 360.0 - 1e-9) break;
      const double t = deg * std::numbers::pi / 180.0;
      directions.push_back({std::cos(t), std::sin(t), 0.0});
    }
  } else {
    if (spec.sphere_directions < 1) throw InvalidParameter("need at least one sphere direction");
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    const int n = spec.sphere_directions;
    for (int i = 0; i < n; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / n;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * i;
      directions.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
    }
  }

  std::vector<BlochVector> out;
  out.reserve(1 + radii.size() * directions.size());
  out.push_back(dim == 2 ? BlochVector::rebit(0.0, 0.0) : BlochVector::qubit(0.0, 0.0, 0.0));
  for (double r : radii) {
    for (const auto& u : directions) {
      // Normalize so that radius-1 shells are exactly pure to rounding.
      const double n = dim == 2 ? std::hypot(u[0], u[1]) : std::hypot(u[0], u[1], u[2]);
      if (dim == 2) {
        out.push_back(BlochVector::rebit(r * u[0] / n, r * u[1] / n));
      } else {
        out.push_back(BlochVector::qubit(r * u[0] / n, r * u[1] / n, r * u[2] / n));
      }
    }
  }
  return out;
}

}  // namespace tomorisk
