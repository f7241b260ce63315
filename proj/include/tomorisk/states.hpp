#pragma once

#include <array>
#include <complex>
#include <span>
#include <string>

#include <Eigen/Core>

#include "tomorisk/errors.hpp"

namespace tomorisk {

/// Slack allowed on every state-validity check (norm, hermiticity, trace, eigenvalues).
inline constexpr double kStateTolerance = 1e-12;

/// A Bloch vector is "pure" when its norm is at least 1 - kPureTolerance.
inline constexpr double kPureTolerance = 1e-9;

namespace detail {

// Fixed-capacity real 2- or 3-vector shared by Bloch and frequency vectors.
class PauliComponents {
 public:
  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] double operator[](int i) const noexcept { return c_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] std::span<const double> components() const noexcept {
    return {c_.data(), static_cast<std::size_t>(dim_)};
  }
  [[nodiscard]] double norm_squared() const noexcept {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += c_[static_cast<std::size_t>(i)] * c_[static_cast<std::size_t>(i)];
    return s;
  }
  [[nodiscard]] double norm() const noexcept;

  // Embeds into (X, Y, Z); a 2-vector is read as (X, Z) with Y = 0.
  [[nodiscard]] std::array<double, 3> xyz() const noexcept {
    if (dim_ == 2) return {c_[0], 0.0, c_[1]};
    return c_;
  }

 protected:
  PauliComponents() = default;
  explicit PauliComponents(std::span<const double> c);

  std::array<double, 3> c_{};
  int dim_ = 3;
};

}  // namespace detail

/// Bloch vector of a rebit, (<X>, <Z>), or a qubit, (<X>, <Y>, <Z>).
///
/// Construction does not require the vector to lie in the unit ball: linear
/// inversion produces vectors outside it. Use `is_valid_state()` or convert
/// with `bloch_to_density()` when a physical state is required.
class BlochVector : public detail::PauliComponents {
 public:
  BlochVector() = default;
  /// Throws InvalidParameter unless `c` has 2 or 3 entries.
  explicit BlochVector(std::span<const double> c) : PauliComponents(c) {}

  static BlochVector rebit(double x, double z) {
    const std::array<double, 2> c{x, z};
    return BlochVector(c);
  }
  static BlochVector qubit(double x, double y, double z) {
    const std::array<double, 3> c{x, y, z};
    return BlochVector(c);
  }

  [[nodiscard]] bool is_valid_state() const noexcept { return norm() <= 1.0 + kStateTolerance; }
  [[nodiscard]] BlochVector scaled(double factor) const noexcept;

  friend bool operator==(const BlochVector& a, const BlochVector& b) noexcept {
    return a.dim_ == b.dim_ && a.c_ == b.c_;
  }
};

/// Linear-inversion frequencies (2n_w - N) / N, one per measured axis. Norm is unconstrained.
class FrequencyVector : public detail::PauliComponents {
 public:
  FrequencyVector() = default;
  explicit FrequencyVector(std::span<const double> c) : PauliComponents(c) {}

  [[nodiscard]] BlochVector as_bloch() const { return BlochVector(components()); }
};

/// 2x2 density matrix. Construction validates hermiticity, unit trace and positivity.
class DensityMatrix {
 public:
  using Matrix = Eigen::Matrix2cd;

  explicit DensityMatrix(const Matrix& m);

  [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }
  [[nodiscard]] std::complex<double> operator()(int i, int j) const { return m_(i, j); }

 private:
  Matrix m_;
};

[[nodiscard]] DensityMatrix bloch_to_density(const BlochVector& r);

/// Returns the qubit Bloch vector (3 components) of `rho`.
[[nodiscard]] BlochVector density_to_bloch(const DensityMatrix& rho);

/// Same, projected to a rebit; throws InvalidState if <Y> is not zero within tolerance.
[[nodiscard]] BlochVector density_to_rebit(const DensityMatrix& rho);

/// Tr rho^2 = (1 + |r|^2) / 2.
[[nodiscard]] double purity(const BlochVector& r) noexcept;

[[nodiscard]] bool is_pure(const BlochVector& r) noexcept;

[[nodiscard]] std::string to_string(const BlochVector& r);

}  // namespace tomorisk
