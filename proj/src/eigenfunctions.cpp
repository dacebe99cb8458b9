#include "rigged/eigenfunctions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rigged/errors.hpp"
#include "rigged/spectrum.hpp"

namespace rigged {

namespace {

const Complex kI(0.0, 1.0);

Complex ipow(Complex z, int n) {
  Complex out(1.0);
  for (int i = 0; i < n; ++i) out *= z;
  return out;
}

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::chi: return "chi";
    case Family::chi_tilde: return "chi_tilde";
    case Family::theta_plus: return "theta_plus";
    case Family::theta_minus: return "theta_minus";
    case Family::theta_tilde: return "theta_tilde";
    case Family::sigma1_neg: return "sigma1_neg";
    case Family::sigma2_pos: return "sigma2_pos";
    case Family::f_of_k: return "f_of_k";
  }
  return "unknown";
}

std::optional<Family> family_from_string(std::string_view name) {
  for (Family f : {Family::chi, Family::chi_tilde, Family::theta_plus,
                   Family::theta_minus, Family::theta_tilde, Family::sigma1_neg,
                   Family::sigma2_pos, Family::f_of_k}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

Complex RegionTerm::value(double r) const {
  return alpha * std::exp(lambda * r) + beta * std::exp(-lambda * r);
}

Complex RegionTerm::derivative(double r, int order) const {
  if (order == 0) return value(r);
  const Complex up = ipow(lambda, order);
  const Complex down = (order % 2 == 0) ? up : -up;
  return alpha * up * std::exp(lambda * r) + beta * down * std::exp(-lambda * r);
}

PiecewiseWave::PiecewiseWave(const PotentialSpec& spec, Family family,
                             const WaveNumbers& w)
    : spec_(spec), family_(family), w_(w) {
  const Complex half_i = 0.5 * kI;
  switch (family) {
    case Family::chi:
      quad_ = j(spec, w);
      regions_ = {RegionTerm{kI * w.q1, -half_i, half_i},
                  RegionTerm{kI * w.q2, quad_[0], quad_[1]},
                  RegionTerm{kI * w.k, quad_[2], quad_[3]}};
      break;
    case Family::chi_tilde:
      quad_ = tilde_j(spec, w);
      regions_ = {RegionTerm{w.q1_tilde, half_i, -half_i},
                  RegionTerm{w.q2_tilde, quad_[0], quad_[1]},
                  RegionTerm{w.k_tilde, quad_[2], quad_[3]}};
      break;
    case Family::theta_plus:
    case Family::f_of_k:
      quad_ = a_plus(spec, w);
      regions_ = {RegionTerm{kI * w.q1, quad_[0], quad_[1]},
                  RegionTerm{kI * w.q2, quad_[2], quad_[3]},
                  RegionTerm{kI * w.k, 1.0, 0.0}};
      break;
    case Family::theta_minus:
      quad_ = a_minus(spec, w);
      regions_ = {RegionTerm{kI * w.q1, quad_[0], quad_[1]},
                  RegionTerm{kI * w.q2, quad_[2], quad_[3]},
                  RegionTerm{kI * w.k, 0.0, 1.0}};
      break;
    case Family::theta_tilde:
      quad_ = tilde_a(spec, w);
      regions_ = {RegionTerm{w.q1_tilde, quad_[0], quad_[1]},
                  RegionTerm{w.q2_tilde, quad_[2], quad_[3]},
                  RegionTerm{w.k_tilde, 0.0, 1.0}};
      break;
    case Family::sigma1_neg:
      quad_ = tilde_b(spec, w);
      regions_ = {RegionTerm{w.q1_tilde, quad_[0], quad_[1]},
                  RegionTerm{w.q2_tilde, quad_[2], quad_[3]},
                  RegionTerm{w.k_tilde, 1.0, 0.0}};
      break;
    case Family::sigma2_pos:
      quad_ = c_coeffs(spec, w);
      regions_ = {RegionTerm{kI * w.q1, 0.5, 0.5},
                  RegionTerm{kI * w.q2, quad_[0], quad_[1]},
                  RegionTerm{kI * w.k, quad_[2], quad_[3]}};
      break;
  }
}

PiecewiseWave PiecewiseWave::make(const PotentialSpec& spec, Family family,
                                  Energy e) {
  return PiecewiseWave(spec, family, rigged::wavenumbers(spec, e));
}

PiecewiseWave PiecewiseWave::make(const PotentialSpec& spec, Family family,
                                  Momentum k) {
  return PiecewiseWave(spec, family, rigged::wavenumbers(spec, k));
}

const RegionTerm& PiecewiseWave::region_left(double r) const {
  if (r <= spec_.a) return regions_[0];
  if (r <= spec_.b) return regions_[1];
  return regions_[2];
}

Complex PiecewiseWave::derivative(double r, int order) const {
  return region_left(r).derivative(r, order);
}

Complex PiecewiseWave::derivative_right(double r, int order) const {
  if (r < spec_.a) return regions_[0].derivative(r, order);
  if (r < spec_.b) return regions_[1].derivative(r, order);
  return regions_[2].derivative(r, order);
}

PiecewiseWave PiecewiseWave::scaled(Complex factor) const {
  PiecewiseWave out = *this;
  for (auto& reg : out.regions_) {
    reg.alpha *= factor;
    reg.beta *= factor;
  }
  for (auto& q : out.quad_.c) q *= factor;
  return out;
}

Complex wronskian(const PiecewiseWave& w1, const PiecewiseWave& w2, double r) {
  return w1.eval(r) * w2.derivative(r, 1) - w1.derivative(r, 1) * w2.eval(r);
}

ContinuumEigenfunction::ContinuumEigenfunction(const PotentialSpec& spec, double e)
    : energy_(e),
      sqrt_rho_(std::sqrt(rho(spec, e))),
      chi_(PiecewiseWave::make(spec, Family::chi, Energy{e})) {}

double ContinuumEigenfunction::sup_abs(int samples) const {
  // Outside b, chi = 2 Re(J3 e^{ikr}), whose sup is exactly 2|J3|.
  double best = 2.0 * std::abs(chi_.quad()[2]);
  const double b = chi_.spec().b;
  for (int i = 0; i <= samples; ++i) {
    const double r = b * static_cast<double>(i) / samples;
    best = std::max(best, std::abs(chi_.eval(r).real()));
  }
  return sqrt_rho_ * best;
}

double phi_delta(const PotentialSpec& spec, double e, double r) {
  return ContinuumEigenfunction(spec, e)(r);
}

double momentum_ket(const PotentialSpec& spec, double k, double r) {
  const auto chi = PiecewiseWave::make(spec, Family::chi, Momentum{k});
  const Complex j3j4 = chi.quad()[2] * chi.quad()[3];
  const Complex prefactor = 1.0 / branch_sqrt(2.0 * std::numbers::pi * j3j4);
  return (prefactor * chi.eval(r)).real();
}

BoundStateFunction::BoundStateFunction(const PotentialSpec& spec,
                                       const BoundState& state)
    : n_(state.n),
      energy_(state.energy),
      norm_(state.n_norm),
      wave_(PiecewiseWave::make(spec, Family::theta_tilde, Energy{state.energy})) {}

BoundStateFunction bound_state_function(const PotentialSpec& spec,
                                        const BoundState& state) {
  return BoundStateFunction(spec, state);
}

double truncation_radius(const PotentialSpec& spec, double kappa) {
  return spec.b + std::max(30.0 / kappa, 10.0 * spec.b);
}

}  // namespace rigged
