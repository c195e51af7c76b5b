#include "holo/kernels.hpp"

#include <cassert>

namespace holo::kernels::scalar {

void partial_fractions(std::span<const cplx> z, std::span<const cplx> poles,
                       std::span<const cplx> coeffs, std::span<cplx> out) {
  assert(z.size() == out.size() && poles.size() == coeffs.size());
  for (std::size_t k = 0; k < z.size(); ++k) {
    double acc_re = 0.0;
    double acc_im = 0.0;
    for (std::size_t j = 0; j < poles.size(); ++j) {
      const double dr = z[k].real() - poles[j].real();
      const double di = z[k].imag() - poles[j].imag();
      const double den = dr * dr + di * di;
      const double cr = coeffs[j].real();
      const double ci = coeffs[j].imag();
      // c / d = c * conj(d) / |d|^2
      acc_re += (cr * dr + ci * di) / den;
      acc_im += (ci * dr - cr * di) / den;
    }
    out[k] = {acc_re, acc_im};
  }
}

cplx weighted_sum(std::span<const double> w, std::span<const cplx> f,
                  std::span<const cplx> dz) {
  assert(w.size() == f.size() && f.size() == dz.size());
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double pr = f[k].real() * dz[k].real() - f[k].imag() * dz[k].imag();
    const double pi = f[k].real() * dz[k].imag() + f[k].imag() * dz[k].real();
    re += w[k] * pr;
    im += w[k] * pi;
  }
  return {re, im};
}

}  // namespace holo::kernels::scalar
