#pragma once

#include <complex>
#include <optional>
#include <string>

namespace rigged {

using Complex = std::complex<double>;

/// Square well-barrier on the half line:
///   V(r) = -v1 on (0,a), v2 on (a,b), 0 on (b,inf).
/// `c` is the unit constant 2m/hbar^2; every formula carries it explicitly.
struct PotentialSpec {
  double v1 = 10.0;
  double v2 = 4.0;
  double a = 1.0;
  double b = 2.0;
  double c = 1.0;

  double potential(double r) const {
    if (r < a) return -v1;
    if (r < b) return v2;
    return 0.0;
  }
};

/// Spectral parameter given as an energy. Branches are fixed by branch_sqrt.
struct Energy {
  Complex value;
};

/// Spectral parameter given as a momentum k, with E = k^2/c. Continuation
/// through k avoids the energy-plane cut.
struct Momentum {
  Complex value;
};

/// Square root with arg(z) in (-pi, pi] mapped to arg in (-pi/2, pi/2].
/// The negative real axis takes arg = pi, so sqrt(-1) = i.
Complex branch_sqrt(Complex z);

/// The six momentum-like quantities of the three regions.
///   k  = sqrt(cE),  q1 = sqrt(c(E+V1)),  q2 = sqrt(c(E-V2))
///   k_tilde, q1_tilde, q2_tilde: the same with the argument negated.
struct WaveNumbers {
  Complex energy;
  Complex k, k_tilde;
  Complex q1, q2;
  Complex q1_tilde, q2_tilde;
};

/// Energy-plane wavenumbers, every root taken with branch_sqrt.
WaveNumbers wavenumbers(const PotentialSpec& spec, Energy e);

/// k-plane wavenumbers: k is taken as given, q_j = k*branch_sqrt(1 + s_j/k^2),
/// and the tilde quantities are -i times their partners. Agrees with the
/// energy form for q1, q2 whenever Re k > 0 (for the tilde quantities only in
/// the first quadrant), and reduces to q1 = q2 = k for V = 0.
WaveNumbers wavenumbers(const PotentialSpec& spec, Momentum k);

/// First violated PotentialSpec invariant, or nullopt when the spec is valid.
std::optional<std::string> validate(const PotentialSpec& spec);

}  // namespace rigged
