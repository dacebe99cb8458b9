#pragma once

#include <array>

#include "rigged/domain.hpp"

namespace rigged {

/// Four amplitudes, one per exponential term of a piecewise solution.
/// Which regions they belong to depends on the family (see PiecewiseWave).
struct CoefficientQuad {
  std::array<Complex, 4> c{};

  Complex& operator[](std::size_t i) { return c[i]; }
  const Complex& operator[](std::size_t i) const { return c[i]; }
};

// Every family below is the closed-form solution of the C^1 matching
// conditions at r = a and r = b, evaluated inner quad first.
//
// All of them throw SingularEnergy when k, q1 or q2 is below threshold:
// |q2| < 1e-9*max(1, sqrt(c*V2)), |k| < 1e-9, |q1| < 1e-9.

/// Coefficients of chi_tilde: (J~1, J~2) on (a,b), (J~3, J~4) on (b,inf),
/// inner solution (i/2)(e^{q1~ r} - e^{-q1~ r}).
CoefficientQuad tilde_j(const PotentialSpec& spec, const WaveNumbers& w);
/// Coefficients of chi: (J1, J2) on (a,b), (J3, J4) on (b,inf), inner sin(q1 r).
CoefficientQuad j(const PotentialSpec& spec, const WaveNumbers& w);
/// Theta_+: outer e^{ikr}; (A+1, A+2) on (0,a), (A+3, A+4) on (a,b).
CoefficientQuad a_plus(const PotentialSpec& spec, const WaveNumbers& w);
/// Theta_-: outer e^{-ikr}.
CoefficientQuad a_minus(const PotentialSpec& spec, const WaveNumbers& w);
/// Theta_tilde: outer e^{-k~ r}.
CoefficientQuad tilde_a(const PotentialSpec& spec, const WaveNumbers& w);
/// sigma_1 of the negative-energy basis: outer e^{+k~ r}.
CoefficientQuad tilde_b(const PotentialSpec& spec, const WaveNumbers& w);
/// sigma_2 of the positive-energy basis: inner cos(q1 r),
/// (C1, C2) on (a,b), (C3, C4) on (b,inf).
CoefficientQuad c_coeffs(const PotentialSpec& spec, const WaveNumbers& w);

CoefficientQuad tilde_j(const PotentialSpec& spec, Energy e);
CoefficientQuad j(const PotentialSpec& spec, Energy e);
CoefficientQuad a_plus(const PotentialSpec& spec, Energy e);
CoefficientQuad a_minus(const PotentialSpec& spec, Energy e);
CoefficientQuad tilde_a(const PotentialSpec& spec, Energy e);
CoefficientQuad tilde_b(const PotentialSpec& spec, Energy e);
CoefficientQuad c_coeffs(const PotentialSpec& spec, Energy e);

/// Throws SingularEnergy if `w` sits on a threshold.
void require_regular(const PotentialSpec& spec, const WaveNumbers& w);

/// Shift applied to threshold energies by callers that need a value there.
Energy nudge_off_threshold(Energy e);

}  // namespace rigged
