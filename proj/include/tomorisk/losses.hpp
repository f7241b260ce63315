#pragma once

#include <string>
#include <string_view>

#include "tomorisk/states.hpp"

namespace tomorisk {

enum class LossKind { HilbertSchmidt, RelativeEntropy, Infidelity };

/// Short CLI names: "hs", "relent", "infid".
[[nodiscard]] std::string_view loss_name(LossKind kind) noexcept;
[[nodiscard]] LossKind parse_loss(std::string_view name);

// Matrix forms, evaluated on 2x2 density matrices.

/// Tr (rho - sigma)^2.
[[nodiscard]] double hs_loss(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Tr rho (log rho - log sigma) in nats. +infinity when supp(rho) is not inside supp(sigma);
/// sigma is treated as rank one whenever its Bloch vector is pure (see kPureTolerance).
[[nodiscard]] double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

/// 1 - Tr sqrt(sqrt(rho) sigma sqrt(rho)), via the 2x2 identity
/// F^2 = Tr(rho sigma) + 2 sqrt(det rho det sigma), radicand clamped to [0, 1].
[[nodiscard]] double infidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

[[nodiscard]] double loss(LossKind kind, const DensityMatrix& rho, const DensityMatrix& sigma);

// Bloch forms. These are what the risk engine evaluates per dataset; they agree with the
// matrix forms above. hs works on any vectors, the others require valid states.

[[nodiscard]] double hs_loss(const BlochVector& truth, const BlochVector& estimate) noexcept;
[[nodiscard]] double relative_entropy(const BlochVector& truth, const BlochVector& estimate);
[[nodiscard]] double infidelity(const BlochVector& truth, const BlochVector& estimate);

[[nodiscard]] double loss(LossKind kind, const BlochVector& truth, const BlochVector& estimate);

}  // namespace tomorisk
