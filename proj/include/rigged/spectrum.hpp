#pragma once

#include <array>
#include <vector>

#include "rigged/domain.hpp"

namespace rigged {

/// A bound state: E_n in (-V1, 0), kappa_n = sqrt(-c E_n), N_n > 0 such that
/// N_n * Theta_tilde(r; E_n) has unit norm.
struct BoundState {
  int n = 0;  // 1-based, energy ascending
  double energy = 0.0;
  double kappa = 0.0;
  double n_norm = 0.0;
};

struct BoundStateSearch {
  int initial_samples = 1024;
  int max_samples = 1 << 16;
  double kappa_tol = 1e-12;
};

/// All zeros of J~3(E) on E in (-V1, 0), located as sign changes of the real
/// function Re J~3(-kappa^2/c) on kappa in (1e-8, sqrt(cV1) - 1e-8).
/// The scan density doubles until the root count is stable across a doubling;
/// throws ScanTooCoarse if that never happens by max_samples.
/// Normalisations are filled from residue_normalization.
std::vector<BoundState> find_bound_states(const PotentialSpec& spec,
                                          const BoundStateSearch& opts = {});

/// N_n^2 = res[theta22^-]_{E_n} = -(c / (2 kappa_n)) J~4(E_n) / J~3'(E_n),
/// with J~3' from a Richardson-extrapolated central difference. Returns N_n.
/// Throws DegenerateRoot if J~3' is negligible.
double residue_normalization(const PotentialSpec& spec, const BoundState& state);

/// N_n from the norm integral: 1 / sqrt(int_0^inf Theta~(r; E_n)^2 dr), with
/// the integral cut at truncation_radius.
double integral_normalization(const PotentialSpec& spec, const BoundState& state);

struct DirectNormalization {
  double theta_plus_integral = 0.0;  // int_0^inf Theta_+(r; k_n)^2 dr
  Complex residue_contour;           // res S at k_n, circle of radius 1e-4
  Complex residue_derivative;        // res S at k_n, -J3 / J4'
  Complex minus_i_over_residue;      // -i / res S
  double contour_vs_derivative = 0.0;  // relative mismatch of the residues
  double mismatch = 0.0;  // |integral - (-i/res S)| / |integral|
};

/// Evaluates both sides of int Theta_+^2 dr = -i / res S independently.
DirectNormalization direct_normalization(const PotentialSpec& spec,
                                         const BoundState& state);

/// Spectral density rho(E) = (1/4pi) (c/sqrt(cE)) / |J4(E)|^2 for E > 0.
double rho(const PotentialSpec& spec, double e);

/// 2x2 theta matrix of the resolvent kernel in a given basis.
struct ThetaMatrix {
  std::array<std::array<Complex, 2>, 2> m{};
  Complex operator()(int i, int j) const { return m[i - 1][j - 1]; }
};

/// theta^- for Re E < 0 in the basis (sigma1 = B~ family, sigma2 = Theta~).
ThetaMatrix theta_minus(const PotentialSpec& spec, Energy e);
/// theta^+ for Re E > 0 in the basis (sigma1 = chi, sigma2 = cos family);
/// the upper or lower half-plane form is chosen by sign of Im E.
ThetaMatrix theta_plus(const PotentialSpec& spec, Energy e);

struct TkOptions {
  std::vector<double> eps = {1e-2, 1e-3, 1e-4, 1e-5};
  double tolerance = 1e-4;
};

struct TkResult {
  double value = 0.0;
  double residual = 0.0;  // difference of the last two extrapolants
  std::vector<double> raw;  // value at each eps before extrapolation
};

/// Titchmarsh-Kodaira boundary-value limit of the spectral measure of (e1,e2):
/// theta11^+ for 0 < e1 < e2, theta22^- for e1 < e2 < 0. Throws NoConvergence
/// if the extrapolation residual exceeds the tolerance.
TkResult tk_measure(const PotentialSpec& spec, double e1, double e2,
                    const TkOptions& opts = {});

/// Jost function J(k) = J+(k) = -2i J4(k), k-plane continuation.
Complex jost(const PotentialSpec& spec, Complex k);

/// k * J4(k) / q1(k): entire in k and free of the k-plane cuts, with the same
/// zeros as J off k = 0 and q1 = 0. Used for zero counting.
Complex regular_jost(const PotentialSpec& spec, Complex k);

/// S(k) = J-/J+ = -J3(k)/J4(k) for real k > 0.
Complex s_matrix(const PotentialSpec& spec, double k);
/// Same formula continued to complex k.
Complex s_matrix(const PotentialSpec& spec, Complex k);

struct KRectangle {
  double re_min, re_max;
  double im_min, im_max;  // im_max < -1e-6
};

/// Zeros of the Jost function inside a lower-half-plane rectangle:
/// argument-principle count, subdivision, Newton refinement.
std::vector<Complex> find_jost_zeros(const PotentialSpec& spec,
                                     const KRectangle& rect);

/// Winding number of regular_jost along the rectangle boundary.
int count_jost_zeros(const PotentialSpec& spec, const KRectangle& rect);

}  // namespace rigged
