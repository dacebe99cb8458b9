#include "rigged/green.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rigged/coeffs.hpp"
#include "rigged/errors.hpp"
#include "rigged/parallel.hpp"

namespace rigged {

namespace {

const Complex kI(0.0, 1.0);

// Distance to the nearest zero of J~3 estimated as |J~3| / |J~3'|.
double distance_to_root(const PotentialSpec& spec, Complex e) {
  const double h = 1e-6 * std::max(1.0, std::abs(e));
  const Complex j3 = tilde_j(spec, Energy{e})[2];
  const Complex up = tilde_j(spec, Energy{e + h})[2];
  const Complex down = tilde_j(spec, Energy{e - h})[2];
  const double slope = std::abs((up - down) / (2.0 * h));
  if (slope == 0.0) return std::abs(j3) == 0.0 ? 0.0 : HUGE_VAL;
  return std::abs(j3) / slope;
}

}  // namespace

std::string_view to_string(GreenRegion g) {
  switch (g) {
    case GreenRegion::negative: return "negative";
    case GreenRegion::upper: return "upper";
    case GreenRegion::lower: return "lower";
    case GreenRegion::k_plane: return "k_plane";
  }
  return "unknown";
}

GreenKernel::GreenKernel(GreenRegion region, PiecewiseWave regular, PiecewiseWave outer,
                         Complex prefactor)
    : region_(region),
      regular_(std::move(regular)),
      outer_(std::move(outer)),
      prefactor_(prefactor) {}

GreenKernel GreenKernel::at_energy(const PotentialSpec& spec, Energy e) {
  const Complex z = e.value;
  if (z.real() >= 0.0 && std::abs(z.imag()) < 1e-12) {
    std::ostringstream msg;
    msg << "energy " << z << " lies on the continuous spectrum";
    throw SpectrumHit(msg.str());
  }
  const WaveNumbers w = wavenumbers(spec, e);
  if (z.real() < 0.0) {
    if (std::abs(z.imag()) < 1e-6 && distance_to_root(spec, z) < 1e-10) {
      std::ostringstream msg;
      msg << "energy " << z << " is a bound-state energy";
      throw SpectrumHit(msg.str());
    }
    PiecewiseWave u(spec, Family::chi_tilde, w);
    PiecewiseWave v(spec, Family::theta_tilde, w);
    const Complex p = -(spec.c / w.k_tilde) / (2.0 * u.quad()[2]);
    return GreenKernel(GreenRegion::negative, std::move(u), std::move(v), p);
  }
  PiecewiseWave u(spec, Family::chi, w);
  if (z.imag() > 0.0) {
    PiecewiseWave v(spec, Family::theta_plus, w);
    const Complex p = (spec.c / w.k) / (2.0 * kI * u.quad()[3]);
    return GreenKernel(GreenRegion::upper, std::move(u), std::move(v), p);
  }
  PiecewiseWave v(spec, Family::theta_minus, w);
  const Complex p = -(spec.c / w.k) / (2.0 * kI * u.quad()[2]);
  return GreenKernel(GreenRegion::lower, std::move(u), std::move(v), p);
}

GreenKernel GreenKernel::at_momentum(const PotentialSpec& spec, Complex k) {
  const WaveNumbers w = wavenumbers(spec, Momentum{k});
  PiecewiseWave u(spec, Family::chi, w);
  PiecewiseWave v(spec, Family::f_of_k, w);
  const Complex j4 = u.quad()[3];
  if (std::abs(j4) <= 1e-12 * std::max(1.0, std::abs(u.quad()[2]))) {
    std::ostringstream msg;
    msg << "k = " << k << " is a zero of the Jost function";
    throw JostZero(msg.str());
  }
  const Complex jost_value = -2.0 * kI * j4;
  const Complex p = -(spec.c / w.k) / jost_value;
  return GreenKernel(GreenRegion::k_plane, std::move(u), std::move(v), p);
}

Complex GreenKernel::operator()(double r, double s) const {
  const double lo = std::min(r, s);
  const double hi = std::max(r, s);
  return prefactor_ * regular_.eval(lo) * outer_.eval(hi);
}

Complex GreenKernel::dr(double r, double s, int side) const {
  if (r > s || (r == s && side > 0)) {
    return prefactor_ * regular_.eval(s) * outer_.derivative_right(r, 1);
  }
  return prefactor_ * regular_.derivative(r, 1) * outer_.eval(s);
}

Complex green_e(const PotentialSpec& spec, Energy e, double r, double s) {
  return GreenKernel::at_energy(spec, e)(r, s);
}

Complex green_k(const PotentialSpec& spec, Complex k, double r, double s) {
  return GreenKernel::at_momentum(spec, k)(r, s);
}

std::vector<Complex> apply_resolvent(const PotentialSpec& spec, Energy e,
                                     const quad::ComplexFn& f, double lo, double hi,
                                     const std::vector<double>& r_grid) {
  const GreenKernel g = GreenKernel::at_energy(spec, e);
  std::vector<Complex> out(r_grid.size());
  parallel_for(r_grid.size(), [&](std::size_t i) {
    const double r = r_grid[i];
    std::vector<double> breaks = {lo, hi};
    for (double x : {r, spec.a, spec.b}) {
      if (x > lo && x < hi) breaks.push_back(x);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    out[i] = quad::integrate_doubling([&](double s) { return g(r, s) * f(s); }, breaks);
  });
  return out;
}

}  // namespace rigged
