#pragma once

#include <string_view>
#include <vector>

#include "tomorisk/estimators.hpp"
#include "tomorisk/losses.hpp"

namespace tomorisk {

/// Discrete distribution over states: a prior, or a posterior after a Bayes update.
class PriorGrid {
 public:
  /// Throws InvalidParameter unless sizes match, weights are nonnegative and sum to 1
  /// within 1e-12, and InvalidState unless every point is a valid state of one dimension.
  PriorGrid(std::vector<BlochVector> points, std::vector<double> weights);

  /// Equal weights on `points`.
  static PriorGrid uniform(std::vector<BlochVector> points);

  [[nodiscard]] const std::vector<BlochVector>& points() const noexcept { return points_; }
  [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }
  [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }

 private:
  std::vector<BlochVector> points_;
  std::vector<double> weights_;
};

/// Bayes update: weights times Pr(d | point), renormalized. Throws ImpossibleData when
/// no point can produce `d`.
[[nodiscard]] PriorGrid posterior(const PriorGrid& prior, const Dataset& d, const MeasurementDesign& design);

[[nodiscard]] BlochVector posterior_mean(const PriorGrid& post);

/// sum_j w_j L(rho_j, candidate); +inf if any positively weighted term diverges.
[[nodiscard]] double posterior_loss(const PriorGrid& post, LossKind loss, const BlochVector& candidate);

/// Candidate with the least posterior loss, first one on ties. Throws DegenerateLoss if
/// every candidate diverges and InvalidParameter if the list is empty.
[[nodiscard]] BlochVector bayes_estimate_grid(const PriorGrid& post, LossKind loss,
                                              const std::vector<BlochVector>& candidates);

enum class Purity { Pure, Mixed };

[[nodiscard]] Purity purity_certificate(const BlochVector& estimate) noexcept;
[[nodiscard]] std::string_view purity_name(Purity p) noexcept;

struct CandidateGridSpec {
  double radial_step = 0.02;
  double angular_step_deg = 2.0;    // rebit circle
  int sphere_directions = 600;      // qubit Fibonacci sphere
  /// Extra shells at radius 1 - 10^-k for k = 3 .. boundary_refinement, so that optima
  /// lying closer to the boundary than one radial step are still seen as interior.
  int boundary_refinement = 8;
};

/// Ball of candidate estimates: the origin, then radial shells times directions.
[[nodiscard]] std::vector<BlochVector> candidate_grid(int dim, const CandidateGridSpec& spec = {});

}  // namespace tomorisk
