#include "holo/weierstrass.hpp"

#include <cmath>
#include <sstream>

#include "holo/error.hpp"

namespace holo {

namespace {

struct Modular {
  long a = 1, b = 0, c = 0, d = 1;
};

}  // namespace

LatticeData::LatticeData(cplx tau) : tau_(tau) {
  if (!(tau.imag() > 0.0) || !std::isfinite(tau.real()) || !std::isfinite(tau.imag())) {
    std::ostringstream msg;
    msg << "lattice needs Im tau > 0, got tau = " << tau;
    throw Error(ErrorCode::DegenerateLattice, msg.str());
  }

  // Reduce tau by T: tau -> tau + k and S: tau -> -1/tau, tracking the
  // SL2(Z) matrix with tau_red = (a tau + b) / (c tau + d).
  Modular m;
  cplx t = tau;
  for (int iter = 0; iter < 200; ++iter) {
    const long shift = std::lround(t.real());
    if (shift != 0) {
      t -= static_cast<double>(shift);
      m = {m.a - shift * m.c, m.b - shift * m.d, m.c, m.d};
    }
    if (std::norm(t) < 1.0 - 1e-14) {
      t = -1.0 / t;
      m = {-m.c, -m.d, m.a, m.b};
    } else {
      break;
    }
  }
  tau_red_ = t;
  scale_ = static_cast<double>(m.c) * tau + static_cast<double>(m.d);

  cplx first_sum{};
  cplx third_sum{};
  theta_terms_ = 0;
  for (int k = 0; k < static_cast<int>(theta_coeff_.size()); ++k) {
    const double half = k + 0.5;
    const cplx coeff = (k % 2 == 0 ? 1.0 : -1.0) * std::exp(cplx(0.0, kPi) * tau_red_ * half * half);
    const double odd = 2.0 * k + 1.0;
    theta_coeff_[k] = coeff;
    theta_terms_ = k + 1;
    first_sum += coeff * odd;
    third_sum += coeff * odd * odd * odd;
    if (std::abs(coeff) * odd * odd * odd < 1e-18 * std::abs(first_sum) && k > 1) break;
  }
  theta1_prime0_ = 2.0 * first_sum;
  eta1_red_ = (kPi * kPi / 3.0) * third_sum / first_sum;
  eta2_red_ = eta1_red_ * tau_red_ - kTwoPiI;

  eta1_ = (static_cast<double>(m.a) * eta1_red_ - static_cast<double>(m.c) * eta2_red_) / scale_;
  eta2_ = (-static_cast<double>(m.b) * eta1_red_ + static_cast<double>(m.d) * eta2_red_) / scale_;
}

cplx LatticeData::reduced_theta(cplx v, bool derivative) const {
  cplx sum{};
  for (int k = 0; k < theta_terms_; ++k) {
    const double odd = 2.0 * k + 1.0;
    sum += derivative ? theta_coeff_[k] * odd * std::cos(odd * v)
                      : theta_coeff_[k] * std::sin(odd * v);
  }
  return 2.0 * sum;
}

std::pair<long, long> LatticeData::nearest_lattice_point(cplx z) const {
  const long n = std::lround(z.imag() / tau_.imag());
  const long m = std::lround((z - static_cast<double>(n) * tau_).real());
  return {m, n};
}

namespace {

// w = w0 + m + n tau_red with w0 in the centered fundamental parallelogram.
struct Reduction {
  cplx w0;
  long m;
  long n;
};

Reduction reduce(cplx w, cplx tau_red) {
  const long n = std::lround(w.imag() / tau_red.imag());
  const cplx shifted = w - static_cast<double>(n) * tau_red;
  const long m = std::lround(shifted.real());
  return {shifted - static_cast<double>(m), m, n};
}

}  // namespace

cplx LatticeData::sigma(cplx z) const {
  const cplx w = z / scale_;
  const auto [w0, m, n] = reduce(w, tau_red_);
  const cplx base = std::exp(0.5 * eta1_red_ * w0 * w0) * reduced_theta(kPi * w0, false) /
                    (kPi * theta1_prime0_);
  cplx value = base;
  if (m != 0 || n != 0) {
    const cplx omega = static_cast<double>(m) + static_cast<double>(n) * tau_red_;
    const cplx eta = static_cast<double>(m) * eta1_red_ + static_cast<double>(n) * eta2_red_;
    const long parity = (m + n + m * n) % 2;
    value *= (parity == 0 ? 1.0 : -1.0) * std::exp(eta * (w0 + 0.5 * omega));
  }
  return scale_ * value;
}

cplx LatticeData::zeta(cplx z) const {
  const cplx w = z / scale_;
  const auto [w0, m, n] = reduce(w, tau_red_);
  const cplx theta = reduced_theta(kPi * w0, false);
  if (std::abs(w0) < 1e-300 || theta == cplx{}) {
    std::ostringstream msg;
    msg << "zeta evaluated on the lattice at z = " << z;
    throw Error(ErrorCode::EvaluationAtConePoint, msg.str());
  }
  const cplx value = eta1_red_ * w0 + kPi * reduced_theta(kPi * w0, true) / theta +
                     static_cast<double>(m) * eta1_red_ + static_cast<double>(n) * eta2_red_;
  return value / scale_;
}

cplx weierstrass_sigma(cplx z, const LatticeData& lattice) { return lattice.sigma(z); }
cplx weierstrass_zeta(cplx z, const LatticeData& lattice) { return lattice.zeta(z); }
std::pair<cplx, cplx> quasi_periods(cplx tau) { return LatticeData(tau).quasi_periods(); }

}  // namespace holo
