#include "rigged/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rigged/errors.hpp"

namespace rigged {

namespace {

const Complex kI(0.0, 1.0);

Complex ex(Complex z) { return std::exp(z); }

}  // namespace

void require_regular(const PotentialSpec& spec, const WaveNumbers& w) {
  const double q2_floor = 1e-9 * std::max(1.0, std::sqrt(spec.c * spec.v2));
  const char* which = nullptr;
  if (std::abs(w.q2) < q2_floor) {
    which = "q2";
  } else if (std::abs(w.k) < 1e-9) {
    which = "k";
  } else if (std::abs(w.q1) < 1e-9) {
    which = "q1";
  }
  if (which != nullptr) {
    std::ostringstream msg;
    msg << "singular energy E = " << w.energy << " (" << which << " vanishes)";
    throw SingularEnergy(msg.str());
  }
}

Energy nudge_off_threshold(Energy e) {
  return {e.value + Complex(0.0, 1e-9 * (1.0 + std::abs(e.value)))};
}

CoefficientQuad tilde_j(const PotentialSpec& spec, const WaveNumbers& w) {
  require_regular(spec, w);
  const double a = spec.a;
  const double b = spec.b;
  const Complex kt = w.k_tilde;
  const Complex q1 = w.q1_tilde;
  const Complex q2 = w.q2_tilde;
  const Complex r12 = q1 / q2;
  const Complex r2k = q2 / kt;

  CoefficientQuad out;
  out[0] = kI / 4.0 * ex(-q2 * a) *
           ((1.0 + r12) * ex(q1 * a) - (1.0 - r12) * ex(-q1 * a));
  out[1] = kI / 4.0 * ex(q2 * a) *
           ((1.0 - r12) * ex(q1 * a) - (1.0 + r12) * ex(-q1 * a));
  out[2] = 0.5 * ex(-kt * b) *
           ((1.0 + r2k) * ex(q2 * b) * out[0] + (1.0 - r2k) * ex(-q2 * b) * out[1]);
  out[3] = 0.5 * ex(kt * b) *
           ((1.0 - r2k) * ex(q2 * b) * out[0] + (1.0 + r2k) * ex(-q2 * b) * out[1]);
  return out;
}

CoefficientQuad j(const PotentialSpec& spec, const WaveNumbers& w) {
  require_regular(spec, w);
  const double a = spec.a;
  const double b = spec.b;
  const Complex k = w.k;
  const Complex q1 = w.q1;
  const Complex q2 = w.q2;
  const Complex s = std::sin(q1 * a);
  const Complex co = std::cos(q1 * a);
  const Complex ratio = q1 / (kI * q2);
  const Complex r2k = q2 / k;

  CoefficientQuad out;
  out[0] = 0.5 * ex(-kI * q2 * a) * (s + ratio * co);
  out[1] = 0.5 * ex(kI * q2 * a) * (s - ratio * co);
  out[2] = 0.5 * ex(-kI * k * b) *
           ((1.0 + r2k) * ex(kI * q2 * b) * out[0] +
            (1.0 - r2k) * ex(-kI * q2 * b) * out[1]);
  out[3] = 0.5 * ex(kI * k * b) *
           ((1.0 - r2k) * ex(kI * q2 * b) * out[0] +
            (1.0 + r2k) * ex(-kI * q2 * b) * out[1]);
  return out;
}

namespace {

// Oscillatory-form Theta family: outer region is e^{sign*ikr}.
CoefficientQuad theta_family(const PotentialSpec& spec, const WaveNumbers& w,
                             double sign) {
  require_regular(spec, w);
  const double a = spec.a;
  const double b = spec.b;
  const Complex k = w.k;
  const Complex q1 = w.q1;
  const Complex q2 = w.q2;
  const Complex rk2 = sign * k / q2;
  const Complex r21 = q2 / q1;
  const Complex outer = ex(sign * kI * k * b);

  CoefficientQuad out;
  out[2] = 0.5 * ex(-kI * q2 * b) * (1.0 + rk2) * outer;
  out[3] = 0.5 * ex(kI * q2 * b) * (1.0 - rk2) * outer;
  out[0] = 0.5 * ex(-kI * q1 * a) *
           ((1.0 + r21) * ex(kI * q2 * a) * out[2] +
            (1.0 - r21) * ex(-kI * q2 * a) * out[3]);
  out[1] = 0.5 * ex(kI * q1 * a) *
           ((1.0 - r21) * ex(kI * q2 * a) * out[2] +
            (1.0 + r21) * ex(-kI * q2 * a) * out[3]);
  return out;
}

// Real-exponential family: outer region is e^{sign*k~ r}.
CoefficientQuad tilde_family(const PotentialSpec& spec, const WaveNumbers& w,
                             double sign) {
  require_regular(spec, w);
  const double a = spec.a;
  const double b = spec.b;
  const Complex kt = w.k_tilde;
  const Complex q1 = w.q1_tilde;
  const Complex q2 = w.q2_tilde;
  const Complex rk2 = sign * kt / q2;
  const Complex r21 = q2 / q1;
  const Complex outer = ex(sign * kt * b);

  CoefficientQuad out;
  out[2] = 0.5 * ex(-q2 * b) * (1.0 + rk2) * outer;
  out[3] = 0.5 * ex(q2 * b) * (1.0 - rk2) * outer;
  out[0] = 0.5 * ex(-q1 * a) *
           ((1.0 + r21) * ex(q2 * a) * out[2] + (1.0 - r21) * ex(-q2 * a) * out[3]);
  out[1] = 0.5 * ex(q1 * a) *
           ((1.0 - r21) * ex(q2 * a) * out[2] + (1.0 + r21) * ex(-q2 * a) * out[3]);
  return out;
}

}  // namespace

CoefficientQuad a_plus(const PotentialSpec& spec, const WaveNumbers& w) {
  return theta_family(spec, w, +1.0);
}

CoefficientQuad a_minus(const PotentialSpec& spec, const WaveNumbers& w) {
  return theta_family(spec, w, -1.0);
}

CoefficientQuad tilde_a(const PotentialSpec& spec, const WaveNumbers& w) {
  return tilde_family(spec, w, -1.0);
}

CoefficientQuad tilde_b(const PotentialSpec& spec, const WaveNumbers& w) {
  return tilde_family(spec, w, +1.0);
}

CoefficientQuad c_coeffs(const PotentialSpec& spec, const WaveNumbers& w) {
  require_regular(spec, w);
  const double a = spec.a;
  const double b = spec.b;
  const Complex k = w.k;
  const Complex q1 = w.q1;
  const Complex q2 = w.q2;
  const Complex s = std::sin(q1 * a);
  const Complex co = std::cos(q1 * a);
  const Complex ratio = q1 / (kI * q2);
  const Complex r2k = q2 / k;

  CoefficientQuad out;
  out[0] = 0.5 * ex(-kI * q2 * a) * (co - ratio * s);
  out[1] = 0.5 * ex(kI * q2 * a) * (co + ratio * s);
  out[2] = 0.5 * ex(-kI * k * b) *
           ((1.0 + r2k) * ex(kI * q2 * b) * out[0] +
            (1.0 - r2k) * ex(-kI * q2 * b) * out[1]);
  // Exponent is q2*b, matching the pattern of every other outer coefficient.
  out[3] = 0.5 * ex(kI * k * b) *
           ((1.0 - r2k) * ex(kI * q2 * b) * out[0] +
            (1.0 + r2k) * ex(-kI * q2 * b) * out[1]);
  return out;
}

CoefficientQuad tilde_j(const PotentialSpec& spec, Energy e) {
  return tilde_j(spec, wavenumbers(spec, e));
}
CoefficientQuad j(const PotentialSpec& spec, Energy e) {
  return j(spec, wavenumbers(spec, e));
}
CoefficientQuad a_plus(const PotentialSpec& spec, Energy e) {
  return a_plus(spec, wavenumbers(spec, e));
}
CoefficientQuad a_minus(const PotentialSpec& spec, Energy e) {
  return a_minus(spec, wavenumbers(spec, e));
}
CoefficientQuad tilde_a(const PotentialSpec& spec, Energy e) {
  return tilde_a(spec, wavenumbers(spec, e));
}
CoefficientQuad tilde_b(const PotentialSpec& spec, Energy e) {
  return tilde_b(spec, wavenumbers(spec, e));
}
CoefficientQuad c_coeffs(const PotentialSpec& spec, Energy e) {
  return c_coeffs(spec, wavenumbers(spec, e));
}

}  // namespace rigged
