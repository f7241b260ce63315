#include "tomorisk/states.hpp"

#include <cmath>
#include <cstdio>

namespace tomorisk {

namespace detail {

PauliComponents::PauliComponents(std::span<const double> c) {
  if (c.size() != 2 && c.size() != 3) {
    throw InvalidParameter("Bloch/frequency vectors have 2 or 3 components, got " +
                           std::to_string(c.size()));
  }
  dim_ = static_cast<int>(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) c_[i] = c[i];
}

double PauliComponents::norm() const noexcept {
  if (dim_ == 2) return std::hypot(c_[0], c_[1]);
  return std::hypot(c_[0], c_[1], c_[2]);
}

}  // namespace detail

BlochVector BlochVector::scaled(double factor) const noexcept {
  BlochVector out = *this;
  for (int i = 0; i < dim_; ++i) out.c_[static_cast<std::size_t>(i)] *= factor;
  return out;
}

DensityMatrix::DensityMatrix(const Matrix& m) : m_(m) {
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (std::abs(m(i, j) - std::conj(m(j, i))) > kStateTolerance) {
        throw InvalidState("matrix is not Hermitian");
      }
    }
  }
  const double tr = m(0, 0).real() + m(1, 1).real();
  if (std::abs(tr - 1.0) > kStateTolerance) {
    throw InvalidState("trace is " + std::to_string(tr));
  }
  // Smallest eigenvalue of a unit-trace 2x2 Hermitian matrix is (1 - |r|) / 2.
  const double x = m(0, 1).real() + m(1, 0).real();
  const double y = m(1, 0).imag() - m(0, 1).imag();
  const double z = m(0, 0).real() - m(1, 1).real();
  const double min_eig = 0.5 * (tr - std::hypot(x, y, z));
  if (min_eig < -kStateTolerance) {
    throw InvalidState("matrix has negative eigenvalue " + std::to_string(min_eig));
  }
}

DensityMatrix bloch_to_density(const BlochVector& r) {
  if (!r.is_valid_state()) {
    throw InvalidState("Bloch vector norm " + std::to_string(r.norm()) + " exceeds 1");
  }
  const auto [x, y, z] = r.xyz();
  using C = std::complex<double>;
  DensityMatrix::Matrix m;
  m << C(0.5 * (1.0 + z), 0.0), C(0.5 * x, -0.5 * y),
       C(0.5 * x, 0.5 * y), C(0.5 * (1.0 - z), 0.0);
  return DensityMatrix(m);
}

BlochVector density_to_bloch(const DensityMatrix& rho) {
  const auto& m = rho.matrix();
  // <X> = 2 Re rho_10, <Y> = 2 Im rho_10, <Z> = rho_00 - rho_11.
  return BlochVector::qubit(2.0 * m(1, 0).real(), 2.0 * m(1, 0).imag(),
                            m(0, 0).real() - m(1, 1).real());
}

BlochVector density_to_rebit(const DensityMatrix& rho) {
  const BlochVector q = density_to_bloch(rho);
  if (std::abs(q[1]) > kStateTolerance) {
    throw InvalidState("state has <Y> = " + std::to_string(q[1]) + ", not a rebit");
  }
  return BlochVector::rebit(q[0], q[2]);
}

double purity(const BlochVector& r) noexcept { return 0.5 * (1.0 + r.norm_squared()); }

bool is_pure(const BlochVector& r) noexcept { return r.norm() >= 1.0 - kPureTolerance; }

std::string to_string(const BlochVector& r) {
  std::string out = "(";
  char buf[32];
  for (int i = 0; i < r.dim(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g", r[i]);
    if (i) out += ", ";
    out += buf;
  }
  return out + ")";
}

}  // namespace tomorisk
