#pragma once

#include <array>
#include <string_view>
#include <optional>

#include "rigged/coeffs.hpp"
#include "rigged/domain.hpp"

namespace rigged {

enum class Family {
  chi,          // regular solution, sin(q1 r) inside
  chi_tilde,    // regular solution in real-exponential form
  theta_plus,   // outgoing e^{ikr} outside
  theta_minus,  // incoming e^{-ikr} outside
  theta_tilde,  // decaying e^{-k~ r} outside
  sigma1_neg,   // growing e^{+k~ r} outside
  sigma2_pos,   // cos(q1 r) inside
  f_of_k,       // theta_plus continued through the k-plane
};

std::string_view to_string(Family f);
std::optional<Family> family_from_string(std::string_view name);

/// One region of a piecewise solution: alpha*e^{lambda r} + beta*e^{-lambda r}.
struct RegionTerm {
  Complex lambda;
  Complex alpha;
  Complex beta;

  Complex value(double r) const;
  /// n-th r-derivative, differentiated term by term.
  Complex derivative(double r, int order) const;
};

/// A three-region solution of h w = E w, immutable once built.
class PiecewiseWave {
 public:
  PiecewiseWave(const PotentialSpec& spec, Family family, const WaveNumbers& w);

  static PiecewiseWave make(const PotentialSpec& spec, Family family, Energy e);
  static PiecewiseWave make(const PotentialSpec& spec, Family family, Momentum k);

  /// Region-dispatched value; r = a and r = b use the left-region formula.
  Complex eval(double r) const { return derivative(r, 0); }
  Complex derivative(double r, int order) const;

  /// Same, but r = a and r = b use the right-region formula.
  Complex derivative_right(double r, int order) const;

  Family family() const { return family_; }
  const WaveNumbers& wavenumbers() const { return w_; }
  const PotentialSpec& spec() const { return spec_; }
  const std::array<RegionTerm, 3>& regions() const { return regions_; }
  /// Coefficient quad the family was built from.
  const CoefficientQuad& quad() const { return quad_; }

  PiecewiseWave scaled(Complex factor) const;

 private:
  const RegionTerm& region_left(double r) const;

  PotentialSpec spec_;
  Family family_;
  WaveNumbers w_;
  CoefficientQuad quad_;
  std::array<RegionTerm, 3> regions_;
};

/// w1*w2' - w1'*w2 at r, analytic derivatives.
Complex wronskian(const PiecewiseWave& w1, const PiecewiseWave& w2, double r);

/// Delta-normalised continuum eigenfunction sqrt(rho(E))*chi(r;E), E > 0.
/// Real for real r. Holds the coefficients so repeated evaluation is cheap.
class ContinuumEigenfunction {
 public:
  ContinuumEigenfunction(const PotentialSpec& spec, double e);

  double energy() const { return energy_; }
  double sqrt_rho() const { return sqrt_rho_; }
  const PiecewiseWave& chi() const { return chi_; }

  double operator()(double r) const { return sqrt_rho_ * chi_.eval(r).real(); }
  /// sup_r |phi(r;E)|: the exact outer amplitude combined with a dense scan
  /// of [0, b].
  double sup_abs(int samples = 4096) const;

 private:
  double energy_;
  double sqrt_rho_;
  PiecewiseWave chi_;
};

double phi_delta(const PotentialSpec& spec, double e, double r);

/// Momentum eigenfunction [2 pi J3(k) J4(k)]^{-1/2} chi(r;k), k > 0.
double momentum_ket(const PotentialSpec& spec, double k, double r);

struct BoundState;

/// N_n * Theta_tilde(r; E_n), a real, unit-norm function.
class BoundStateFunction {
 public:
  explicit BoundStateFunction(const PotentialSpec& spec, const BoundState& state);

  int n() const { return n_; }
  double energy() const { return energy_; }
  double normalization() const { return norm_; }
  const PiecewiseWave& wave() const { return wave_; }

  double operator()(double r) const { return norm_ * wave_.eval(r).real(); }
  double derivative(double r, int order) const {
    return norm_ * wave_.derivative(r, order).real();
  }

 private:
  int n_;
  double energy_;
  double norm_;
  PiecewiseWave wave_;
};

BoundStateFunction bound_state_function(const PotentialSpec& spec,
                                        const BoundState& state);

/// Truncation radius for half-line integrals of a function decaying like
/// e^{-kappa r}: b + max(30/kappa, 10 b).
double truncation_radius(const PotentialSpec& spec, double kappa);

}  // namespace rigged
