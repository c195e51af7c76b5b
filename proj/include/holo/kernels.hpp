#pragma once

// Data-parallel inner loops shared by the quadrature engine and the
// connection-form evaluator. Each kernel has a scalar reference
// implementation and an AVX2 variant; the active backend is picked once at
// startup from the CPU features (override with HOLO_KERNELS=scalar).

#include <complex>
#include <span>
#include <string_view>

namespace holo::kernels {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2 };

bool avx2_available() noexcept;
Backend active_backend() noexcept;
/// Throws std::invalid_argument when the backend is not supported here.
void set_backend(Backend backend);
std::string_view backend_name(Backend backend) noexcept;

/// out[k] = sum_j coeffs[j] / (z[k] - poles[j]).
void partial_fractions(std::span<const cplx> z, std::span<const cplx> poles,
                       std::span<const cplx> coeffs, std::span<cplx> out);

/// sum_k w[k] * f[k] * dz[k].
cplx weighted_sum(std::span<const double> w, std::span<const cplx> f,
                  std::span<const cplx> dz);

namespace scalar {
void partial_fractions(std::span<const cplx> z, std::span<const cplx> poles,
                       std::span<const cplx> coeffs, std::span<cplx> out);
cplx weighted_sum(std::span<const double> w, std::span<const cplx> f,
                  std::span<const cplx> dz);
}  // namespace scalar

namespace avx2 {
void partial_fractions(std::span<const cplx> z, std::span<const cplx> poles,
                       std::span<const cplx> coeffs, std::span<cplx> out);
cplx weighted_sum(std::span<const double> w, std::span<const cplx> f,
                  std::span<const cplx> dz);
}  // namespace avx2

}  // namespace holo::kernels
