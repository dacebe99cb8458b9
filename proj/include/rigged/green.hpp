#pragma once

#include <string_view>
#include <vector>

#include "rigged/domain.hpp"
#include "rigged/eigenfunctions.hpp"
#include "rigged/quadrature.hpp"

namespace rigged {

enum class GreenRegion { negative, upper, lower, k_plane };

std::string_view to_string(GreenRegion g);

/// Resolvent kernel of (E - h): G(r,s) = p * u(r_<) * v(r_>), with u the
/// regular solution and v the solution selected by the region.
///   negative (Re E < 0):          u = chi~, v = Theta~,  p = -(c/k~) / (2 J~3)
///   upper (Re E >= 0, Im E > 0):  u = chi,  v = Theta_+, p = (c/k) / (2i J4)
///   lower (Re E >= 0, Im E < 0):  u = chi,  v = Theta_-, p = -(c/k) / (2i J3)
///   k_plane:                      u = chi,  v = f(k),    p = -(c/k) / J(k)
/// The derivative jump across r = s is c in every region.
class GreenKernel {
 public:
  /// Throws SpectrumHit on [0, inf) (|Im E| < 1e-12) or within 1e-10 of a
  /// bound energy.
  static GreenKernel at_energy(const PotentialSpec& spec, Energy e);
  /// Throws JostZero when J(k) vanishes to working precision.
  static GreenKernel at_momentum(const PotentialSpec& spec, Complex k);

  Complex operator()(double r, double s) const;
  /// dG/dr. At r == s, side > 0 takes the r > s branch, otherwise r < s.
  Complex dr(double r, double s, int side) const;

  GreenRegion region() const { return region_; }
  Complex prefactor() const { return prefactor_; }

 private:
  GreenKernel(GreenRegion region, PiecewiseWave regular, PiecewiseWave outer,
              Complex prefactor);

  GreenRegion region_;
  PiecewiseWave regular_;
  PiecewiseWave outer_;
  Complex prefactor_;
};

Complex green_e(const PotentialSpec& spec, Energy e, double r, double s);
Complex green_k(const PotentialSpec& spec, Complex k, double r, double s);

/// g(r) = int G(r,s;E) f(s) ds over the support [lo, hi] at each point of
/// r_grid. Panels break at s = r, a and b; 32-point Gauss with panel doubling
/// to 1e-10 relative. Grid points are evaluated in parallel; each result
/// depends only on its own point.
std::vector<Complex> apply_resolvent(const PotentialSpec& spec, Energy e,
                                     const quad::ComplexFn& f, double lo, double hi,
                                     const std::vector<double>& r_grid);

}  // namespace rigged
