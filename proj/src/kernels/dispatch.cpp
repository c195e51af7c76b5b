#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "holo/kernels.hpp"

namespace holo::kernels {
namespace {

Backend detect() noexcept {
  if (const char* env = std::getenv("HOLO_KERNELS")) {
    if (std::string(env) == "scalar") return Backend::Scalar;
  }
  return avx2_available() ? Backend::Avx2 : Backend::Scalar;
}

std::atomic<Backend>& selected() noexcept {
  static std::atomic<Backend> backend{detect()};
  return backend;
}

}  // namespace

bool avx2_available() noexcept {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend active_backend() noexcept {
  return selected().load(std::memory_order_relaxed);
}

void set_backend(Backend backend) {
  if (backend == Backend::Avx2 && !avx2_available()) {
    throw std::invalid_argument("AVX2 backend not supported on this CPU");
  }
  selected().store(backend, std::memory_order_relaxed);
}

std::string_view backend_name(Backend backend) noexcept {
  return backend == Backend::Avx2 ? "avx2" : "scalar";
}

void partial_fractions(std::span<const cplx> z, std::span<const cplx> poles,
                       std::span<const cplx> coeffs, std::span<cplx> out) {
  if (active_backend() == Backend::Avx2) {
    avx2::partial_fractions(z, poles, coeffs, out);
  } else {
    scalar::partial_fractions(z, poles, coeffs, out);
  }
}

cplx weighted_sum(std::span<const double> w, std::span<const cplx> f,
                  std::span<const cplx> dz) {
  if (active_backend() == Backend::Avx2) return avx2::weighted_sum(w, f, dz);
  return scalar::weighted_sum(w, f, dz);
}

}  // namespace holo::kernels
