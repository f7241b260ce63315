#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tomorisk/states.hpp"

namespace tomorisk {

enum class Axis { X, Y, Z };

[[nodiscard]] char axis_label(Axis a) noexcept;

/// Pauli axes measured, each `shots` times. Two layouts are supported and they fix the
/// Bloch-vector layout: rebit {X, Z} and qubit {X, Y, Z}.
class MeasurementDesign {
 public:
  /// Throws InvalidParameter for any other axis list or shots < 1.
  MeasurementDesign(std::vector<Axis> axes, int shots);

  static MeasurementDesign rebit(int shots) { return {{Axis::X, Axis::Z}, shots}; }
  static MeasurementDesign qubit(int shots) { return {{Axis::X, Axis::Y, Axis::Z}, shots}; }

  [[nodiscard]] std::span<const Axis> axes() const noexcept { return axes_; }
  [[nodiscard]] int num_axes() const noexcept { return static_cast<int>(axes_.size()); }
  [[nodiscard]] int shots() const noexcept { return shots_; }
  [[nodiscard]] bool is_rebit() const noexcept { return axes_.size() == 2; }
  [[nodiscard]] std::string_view name() const noexcept { return is_rebit() ? "rebit" : "qubit"; }

  /// (N + 1)^axes.
  [[nodiscard]] std::size_t num_datasets() const noexcept;

  friend bool operator==(const MeasurementDesign&, const MeasurementDesign&) = default;

 private:
  std::vector<Axis> axes_;
  int shots_;
};

/// Number of "+1" outcomes per axis, aligned with the design's axes.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::span<const int> counts);
  Dataset(std::initializer_list<int> counts)
      : Dataset(std::span<const int>(counts.begin(), counts.size())) {}

  [[nodiscard]] int size() const noexcept { return size_; }
  [[nodiscard]] int operator[](int i) const noexcept { return counts_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] std::span<const int> counts() const noexcept {
    return {counts_.data(), static_cast<std::size_t>(size_)};
  }

  /// Throws InvalidDataset unless sizes match and every count lies in [0, N].
  void validate(const MeasurementDesign& design) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::array<int, 3> counts_{};
  int size_ = 0;
};

enum class EstimatorKind { LinearInversion, ConstrainedLS, Hedged, MLE, HedgedMLE };

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::ConstrainedLS;
  double h = 0.0;  // hedging strength, used by Hedged and HedgedMLE only

  static EstimatorSpec linear_inversion() { return {EstimatorKind::LinearInversion, 0.0}; }
  static EstimatorSpec constrained_ls() { return {EstimatorKind::ConstrainedLS, 0.0}; }
  static EstimatorSpec hedged(double h) { return {EstimatorKind::Hedged, h}; }
  static EstimatorSpec mle() { return {EstimatorKind::MLE, 0.0}; }
  static EstimatorSpec hedged_mle(double h) { return {EstimatorKind::HedgedMLE, h}; }

  [[nodiscard]] bool is_hedged() const noexcept {
    return kind == EstimatorKind::Hedged || kind == EstimatorKind::HedgedMLE;
  }
  /// Throws InvalidParameter if a hedged kind has h outside (0, 1).
  void validate() const;
  /// e.g. "cls", "hedged(0.1875)".
  [[nodiscard]] std::string name() const;

  friend bool operator==(const EstimatorSpec&, const EstimatorSpec&) = default;
};

/// Parses "li", "cls", "mle", "hedged", "hedged-mle", optionally with "(h)" or ":h".
/// Hedged kinds without an explicit h take `default_hedge`.
[[nodiscard]] EstimatorSpec parse_estimator(std::string_view text, double default_hedge);

[[nodiscard]] FrequencyVector frequencies(const Dataset& d, const MeasurementDesign& design);

/// Projection of f onto the unit ball: f if |f|^2 < 1, else f / |f|.
[[nodiscard]] BlochVector constrained_ls(const FrequencyVector& f);

/// f if |f|^2 < 1, else sqrt(1 - h) f / |f|. Requires 0 < h < 1.
[[nodiscard]] BlochVector hedged(const FrequencyVector& f, double h);

/// 1/N - 1/N^2. Zero at N = 1, which no hedged estimator accepts.
[[nodiscard]] double default_h(int shots);

/// Scales pure estimates by sqrt(1 - h), leaves mixed ones alone.
[[nodiscard]] BlochVector apply_hedging(const BlochVector& estimate, double h);

/// Sum over axes of n log((1 + r_w)/2) + (N - n) log((1 - r_w)/2), with 0 log 0 = 0.
/// Returns -infinity where the data is impossible.
[[nodiscard]] double log_likelihood(const BlochVector& r, const Dataset& d,
                                    const MeasurementDesign& design);

struct MleOptions {
  double tolerance = 1e-10;     // projected-gradient norm at convergence
  int max_iterations = 100000;
  double armijo = 1e-4;
};

/// Raised when projected gradient ascent stops before reaching the tolerance.
class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, BlochVector last_iterate, double residual)
      : Error("solver failure: " + what), last_iterate_(last_iterate), residual_(residual) {}

  [[nodiscard]] const BlochVector& last_iterate() const noexcept { return last_iterate_; }
  [[nodiscard]] double residual() const noexcept { return residual_; }

 private:
  BlochVector last_iterate_;
  double residual_;
};

/// Maximum-likelihood state. Returns f exactly when |f| <= 1; otherwise runs projected
/// gradient ascent on the unit ball from f / |f|. Deterministic.
[[nodiscard]] BlochVector mle(const Dataset& d, const MeasurementDesign& design,
                              const MleOptions& options = {});

/// Evaluates any estimator on one dataset.
[[nodiscard]] BlochVector estimate(const EstimatorSpec& spec, const Dataset& d,
                                   const MeasurementDesign& design);

}  // namespace tomorisk
