#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "tomorisk/estimators.hpp"
#include "tomorisk/losses.hpp"

namespace tomorisk {

// ---------------------------------------------------------------------------
// Dataset space

/// Pr(D | r) as a product of per-axis binomials with p_w(+1) = (1 + r_w) / 2.
/// Each factor is evaluated in log space (log-gamma coefficients) and exponentiated.
[[nodiscard]] double dataset_probability(const Dataset& d, const BlochVector& r,
                                         const MeasurementDesign& design);

/// All (N + 1)^axes count tuples, lexicographic, last axis fastest.
[[nodiscard]] std::vector<Dataset> enumerate_datasets(const MeasurementDesign& design);

/// Position of `d` in enumerate_datasets(design).
[[nodiscard]] std::size_t dataset_index(const Dataset& d, const MeasurementDesign& design);

/// Per-axis binomial pmf tables at a fixed true state: table[w][n] = Pr(n_w = n | r).
class OutcomeDistribution {
 public:
  OutcomeDistribution(const BlochVector& r, const MeasurementDesign& design);

  [[nodiscard]] double axis_pmf(int axis, int count) const noexcept {
    return pmf_[static_cast<std::size_t>(axis)][static_cast<std::size_t>(count)];
  }
  [[nodiscard]] double probability(const Dataset& d) const noexcept;

 private:
  std::vector<std::vector<double>> pmf_;
};

// ---------------------------------------------------------------------------
// Risk

/// Estimates of one estimator on every dataset of a design, in enumeration order.
class EstimateTable {
 public:
  EstimateTable(const EstimatorSpec& spec, const MeasurementDesign& design);

  [[nodiscard]] const EstimatorSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] std::size_t size() const noexcept { return estimates_.size(); }
  [[nodiscard]] const BlochVector& operator[](std::size_t i) const noexcept { return estimates_[i]; }

 private:
  EstimatorSpec spec_;
  std::vector<BlochVector> estimates_;
};

/// Risks of two estimators at one true state, plus the paired difference
/// sum_D Pr(D) [L_A(D) - L_B(D)], which is nullopt when either risk diverges.
struct RiskPair {
  double risk_a = 0.0;
  double risk_b = 0.0;
  std::optional<double> difference;
};

/// Exact risk by enumeration of every dataset of one design.
///
/// Estimate tables are built on first use per estimator and shared read-only afterwards,
/// so one engine may serve many threads. Terms are summed in enumeration order with
/// compensated summation; datasets with zero probability are skipped, so 0 * inf = 0.
class RiskEngine {
 public:
  explicit RiskEngine(MeasurementDesign design);

  [[nodiscard]] const MeasurementDesign& design() const noexcept { return design_; }

  /// Cached table for `spec`; throws SolverFailure if MLE fails on some dataset.
  [[nodiscard]] std::shared_ptr<const EstimateTable> estimates(const EstimatorSpec& spec);

  [[nodiscard]] double risk(const BlochVector& truth, const EstimatorSpec& spec, LossKind loss);
  [[nodiscard]] RiskPair risk_pair(const BlochVector& truth, const EstimatorSpec& a,
                                   const EstimatorSpec& b, LossKind loss);

 private:
  MeasurementDesign design_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const EstimateTable>> cache_;
};

/// Uncached risk: estimates are recomputed for every dataset.
[[nodiscard]] double risk(const BlochVector& truth, const EstimatorSpec& spec, LossKind loss,
                          const MeasurementDesign& design);

/// N [R(r, A) - R(r, B)], with the difference taken dataset by dataset.
/// Throws UndefinedDifference when either risk is infinite.
[[nodiscard]] double scaled_risk_difference(const BlochVector& truth, const EstimatorSpec& a,
                                            const EstimatorSpec& b, LossKind loss,
                                            RiskEngine& engine);

// ---------------------------------------------------------------------------
// Sweeps

enum class DifferenceMode {
  Scaled,  // N (R_A - R_B)
  Ratio,   // (R_A - R_B) / R_B
};

struct RiskRecord {
  BlochVector true_state;
  EstimatorSpec estimator;
  LossKind loss = LossKind::HilbertSchmidt;
  int shots = 0;
  double risk = 0.0;  // may be +inf
};

struct RiskSurfaceRow {
  double coordinate = 0.0;
  RiskRecord a;
  RiskRecord b;
  std::optional<double> scaled_diff;  // nullopt when undefined
};

struct RiskSurface {
  std::string axis_label;
  std::vector<RiskSurfaceRow> rows;
};

/// Evaluates `task(i)` for i in [0, count) on up to `jobs` threads. Results must be
/// written to slots owned by i; the first exception thrown is rethrown.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& task);

/// One row per radius with truth radius * direction. Requires a unit direction and
/// strictly increasing radii in [0, 1].
[[nodiscard]] RiskSurface sweep(const BlochVector& direction, const std::vector<double>& radii,
                                const EstimatorSpec& a, const EstimatorSpec& b, LossKind loss,
                                RiskEngine& engine, int jobs = 1,
                                DifferenceMode mode = DifferenceMode::Scaled);

struct HedgeScanRow {
  double h = 0.0;
  double risk = 0.0;
};

/// Risk of Hedged(h) at `truth` for every h of the grid, in grid order.
[[nodiscard]] std::vector<HedgeScanRow> hedge_scan(const BlochVector& truth,
                                                   const std::vector<double>& h_grid,
                                                   LossKind loss, RiskEngine& engine, int jobs = 1);

/// First row of minimal risk.
[[nodiscard]] HedgeScanRow scan_argmin(const std::vector<HedgeScanRow>& rows);

struct DiskGrid {
  double radial_step = 0.01;
  double angular_step_deg = 2.0;
};

struct DiskPoint {
  double angle_deg = 0.0;  // measured from +X toward +Z
  double radius = 0.0;
  double risk_a = 0.0;
  double risk_b = 0.0;
  std::optional<double> diff;  // R_A - R_B, nullopt when undefined
};

/// Risk-difference field over the Bloch disk, angle-major. Rebit designs only.
[[nodiscard]] std::vector<DiskPoint> risk_disk(const DiskGrid& grid, const EstimatorSpec& a,
                                               const EstimatorSpec& b, LossKind loss,
                                               RiskEngine& engine, int jobs = 1);

/// start, start + step, ..., up to stop inclusive (within step / 1e6).
[[nodiscard]] std::vector<double> linear_grid(double start, double stop, double step);

}  // namespace tomorisk
