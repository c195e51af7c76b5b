#pragma once

// Weierstrass sigma and zeta for the lattice Z + tau Z, evaluated through
// Jacobi theta series after reducing tau to the fundamental domain.

#include <array>
#include <utility>

#include "holo/numerics.hpp"

namespace holo {

/// The lattice <1, tau> with its quasi-periods (eta1, eta2), normalized so
/// that zeta(z + 1) = zeta(z) + eta1 and zeta(z + tau) = zeta(z) + eta2.
class LatticeData {
 public:
  /// Throws DegenerateLattice when Im tau <= 0.
  explicit LatticeData(cplx tau);

  cplx tau() const noexcept { return tau_; }
  std::pair<cplx, cplx> quasi_periods() const noexcept { return {eta1_, eta2_}; }
  cplx eta1() const noexcept { return eta1_; }
  cplx eta2() const noexcept { return eta2_; }

  cplx sigma(cplx z) const;
  /// Throws EvaluationAtConePoint when z lies on the lattice.
  cplx zeta(cplx z) const;

  /// Nearest lattice point m + n tau to z.
  std::pair<long, long> nearest_lattice_point(cplx z) const;

 private:
  cplx tau_;
  cplx eta1_;
  cplx eta2_;
  // Reduced lattice <1, tau_red> with <1, tau> = scale * <1, tau_red>.
  cplx tau_red_;
  cplx scale_;
  cplx eta1_red_;
  cplx eta2_red_;
  std::array<cplx, 24> theta_coeff_{};  // (-1)^k q^{(k+1/2)^2}
  int theta_terms_ = 0;
  cplx theta1_prime0_;

  cplx reduced_theta(cplx v, bool derivative) const;
};

cplx weierstrass_sigma(cplx z, const LatticeData& lattice);
cplx weierstrass_zeta(cplx z, const LatticeData& lattice);
/// (eta1, eta2) for <1, tau>; satisfies eta1 * tau - eta2 = 2 pi i.
std::pair<cplx, cplx> quasi_periods(cplx tau);

}  // namespace holo
