#pragma once

// Dimension bookkeeping at genus 0 and 1: Riemann-Roch for line bundles,
// the hypercohomology sequence, the coderivative rows and the trans sheaf.

#include <array>

#include "holo/numerics.hpp"
#include "holo/surface.hpp"

namespace holo {

struct LineBundleDims {
  int h0 = 0;
  int h1 = 0;
  bool operator==(const LineBundleDims&) const = default;
};

/// Riemann-Roch on P^1 or an elliptic curve. `trivial` only matters for
/// degree 0 at genus 1. Throws GenusUnsupported for genus >= 2.
LineBundleDims line_bundle_dims(int genus, int degree, bool trivial = false);

/// h0(Omega(C)) + h1(T(-C)). Allowed for n >= 1 with 2g - 2 + n > 0 and for
/// (1, 0); UnstableConfiguration otherwise.
int dim_H1_L(int genus, int n);

struct DimReport {
  int genus = 0;
  int n = 0;
  int h0_omega_C = 0;
  int h1_T_minus_C = 0;
  int dim_H1_L = 0;
  int dim_moduli = 0;      // chart parameters of the affine moduli space
  int dim_hol_target = 0;  // rank of H_1(X - C)
  std::array<int, 3> top{};     // h0(Omega), dim H_1(X - C), h1(O(-C))
  std::array<int, 3> bottom{};  // h0(Omega^2(C)), dim T*, h1(O(-C))
  bool top_exact = false;
  bool bottom_exact = false;
};

DimReport coderivative_rows(int genus, int n);

struct TransDims {
  int h0 = 0;
  int h1 = 0;
  int h2 = 0;
  bool operator==(const TransDims&) const = default;
};

/// h2 = [chi trivial]; h1 = h1_c of X minus the non-integral cone points
/// with coefficients in chi; h0 = [chi trivial and every order <= -1].
TransDims trans_dims(const AffineSurfaceSpec& spec, const Quadrature& q = {});

/// chi(trans) - chi(T(-C)) + chi(O) - |P_Z|; zero whenever the trans
/// sequence is exact.
int trans_euler_defect(const AffineSurfaceSpec& spec, const TransDims& dims);

}  // namespace holo
