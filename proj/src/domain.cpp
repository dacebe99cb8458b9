#include "rigged/domain.hpp"

#include <cmath>

namespace rigged {

Complex branch_sqrt(Complex z) {
  const double re = z.real();
  const double im = z.imag();
  // std::sqrt puts -0.0 imaginary parts on the lower lip; the cut belongs to
  // the upper lip here.
  if (im == 0.0) {
    if (re >= 0.0) return {std::sqrt(re), 0.0};
    return {0.0, std::sqrt(-re)};
  }
  Complex w = std::sqrt(z);
  // std::sqrt already returns Re w >= 0; pin the half-open edge Re w == 0.
  if (w.real() == 0.0 && w.imag() < 0.0) w = -w;
  return w;
}

WaveNumbers wavenumbers(const PotentialSpec& spec, Energy e) {
  const Complex ce = spec.c * e.value;
  const Complex c1 = spec.c * (e.value + spec.v1);
  const Complex c2 = spec.c * (e.value - spec.v2);
  WaveNumbers w;
  w.energy = e.value;
  w.k = branch_sqrt(ce);
  w.k_tilde = branch_sqrt(-ce);
  w.q1 = branch_sqrt(c1);
  w.q2 = branch_sqrt(c2);
  w.q1_tilde = branch_sqrt(-c1);
  w.q2_tilde = branch_sqrt(-c2);
  return w;
}

namespace {

// q = k*sqrt(1 + shift/k^2): continuous in k off the segment where
// k^2 lies in [-shift, 0] (or [0, -shift] for negative shifts).
Complex continued_root(Complex k, double shift) {
  if (k == Complex(0.0)) return branch_sqrt(Complex(shift));
  return k * branch_sqrt(1.0 + shift / (k * k));
}

}  // namespace

WaveNumbers wavenumbers(const PotentialSpec& spec, Momentum k) {
  const Complex minus_i(0.0, -1.0);
  WaveNumbers w;
  w.k = k.value;
  w.energy = k.value * k.value / spec.c;
  w.q1 = continued_root(k.value, spec.c * spec.v1);
  w.q2 = continued_root(k.value, -spec.c * spec.v2);
  w.k_tilde = minus_i * w.k;
  w.q1_tilde = minus_i * w.q1;
  w.q2_tilde = minus_i * w.q2;
  return w;
}

std::optional<std::string> validate(const PotentialSpec& spec) {
  const auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(spec.v1) || !finite(spec.v2) || !finite(spec.a) ||
      !finite(spec.b) || !finite(spec.c)) {
    return std::string("all parameters finite");
  }
  if (!(spec.v1 > 0.0)) return std::string("v1 > 0");
  if (!(spec.v2 >= 0.0)) return std::string("v2 >= 0");
  if (!(spec.a > 0.0)) return std::string("a > 0");
  if (!(spec.a < spec.b)) return std::string("a < b");
  if (!(spec.c > 0.0)) return std::string("c > 0");
  return std::nullopt;
}

}  // namespace rigged
