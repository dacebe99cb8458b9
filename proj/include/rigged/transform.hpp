#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rigged/domain.hpp"
#include "rigged/eigenfunctions.hpp"
#include "rigged/quadrature.hpp"
#include "rigged/spectrum.hpp"

namespace rigged {

/// A function on [lo, hi] (zero outside) with derivatives up to max_order.
/// Derivatives at a kink use the left-side value.
class TestFunction {
 public:
  using Derivative = std::function<Complex(double r, int order)>;

  TestFunction(std::string label, double lo, double hi, int max_order, Derivative d,
               std::vector<double> kinks = {});

  Complex operator()(double r) const { return derivative(r, 0); }
  /// Throws ValidationError above max_order.
  Complex derivative(double r, int order) const;

  const std::string& label() const { return label_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  int max_order() const { return max_order_; }
  const std::vector<double>& kinks() const { return kinks_; }

 private:
  std::string label_;
  double lo_, hi_;
  int max_order_;
  Derivative d_;
  std::vector<double> kinks_;
};

/// exp(-1/(1-t^2)) with t mapping (lo, hi) onto (-1, 1), times amplitude.
/// Derivatives are exact to order 16.
TestFunction bump(double lo, double hi, double amplitude = 1.0);
/// r e^{-r} cut off at `cutoff`.
TestFunction r_exp(double cutoff = 60.0);
/// The normalised bound state, cut at its truncation radius.
TestFunction bound_state(const PotentialSpec& spec, const BoundState& state);
/// Interpolated samples (ascending r): quintic B-spline for uniform spacing,
/// modified Akima otherwise. max_order 2.
TestFunction sampled(std::vector<double> r, std::vector<Complex> values);
/// alpha f + beta g on the union of supports.
TestFunction combine(Complex alpha, const TestFunction& f, Complex beta,
                     const TestFunction& g);
/// h f with h = -(1/c) d^2/dr^2 + V, applied region by region.
TestFunction apply_h(const PotentialSpec& spec, const TestFunction& f);

/// h^m f at r: sum_j C(m,j) (-1/c)^j V(r)^{m-j} f^{(2j)}(r).
Complex apply_h_power(const PotentialSpec& spec, const TestFunction& f, int m, double r);

/// Gauss-Legendre nodes in k on [0, k_max]; E = k^2/c, dE weight = w_k 2k/c.
struct EnergyGrid {
  double k_max = 0.0;
  std::vector<double> k;
  std::vector<double> k_weight;
  std::vector<double> e;
  std::vector<double> weight;
};

double default_k_max(const PotentialSpec& spec);
EnergyGrid k_gauss_grid(const PotentialSpec& spec, int nodes = 2048, double k_max = 0.0);

/// Continuum eigenfunctions at every node of a grid, built once.
class ContinuumBasis {
 public:
  ContinuumBasis(const PotentialSpec& spec, EnergyGrid grid);

  const PotentialSpec& spec() const { return spec_; }
  const EnergyGrid& grid() const { return grid_; }
  const ContinuumEigenfunction& operator[](std::size_t j) const { return phi_[j]; }
  std::size_t size() const { return phi_.size(); }

 private:
  PotentialSpec spec_;
  EnergyGrid grid_;
  std::vector<ContinuumEigenfunction> phi_;
};

/// Fixed composite Gauss grid in r over f's support with breaks at a, b and
/// f's kinks; panels no wider than min(0.25, 2 pi / k_max).
quad::Grid r_grid(const PotentialSpec& spec, double lo, double hi, double k_max,
                  const std::vector<double>& kinks = {});
quad::Grid r_grid(const PotentialSpec& spec, const TestFunction& f, double k_max);

/// c_n = int phi_n f dr.
std::vector<Complex> forward_bound(const PotentialSpec& spec,
                                   const std::vector<BoundState>& states,
                                   const TestFunction& f, double k_max = 0.0);
/// f^(E_j) = int f(r) phi(r;E_j) dr at every grid node.
std::vector<Complex> forward_continuum(const ContinuumBasis& basis, const TestFunction& f);
/// f_c(r) = sum_j W_j f^_j phi(r;E_j) at each point.
std::vector<Complex> inverse_continuum(const ContinuumBasis& basis,
                                       const std::vector<Complex>& fhat,
                                       const std::vector<double>& r);

struct DecomposedState {
  std::vector<Complex> bound;
  EnergyGrid grid;
  std::vector<Complex> continuum;
};

DecomposedState decompose(const ContinuumBasis& basis, const std::vector<BoundState>& states,
                          const TestFunction& f);
std::vector<Complex> reconstruct(const ContinuumBasis& basis,
                                 const std::vector<BoundState>& states,
                                 const DecomposedState& d, const std::vector<double>& r);

/// {"bound":[{"n","re","im"}],"continuum":{"grid":"k-gauss-legendre","k_max",
/// "nodes":[{"e","re","im"}]}}
std::string to_json(const DecomposedState& d, int indent = 2);

struct RoundTrip {
  double error = 0.0;     // L2 norm of f - reconstruct(decompose(f))
  double norm = 0.0;      // L2 norm of f
  double relative = 0.0;  // error / norm (0 when f = 0)
};

/// L2 round-trip error on f's r-grid extended by `margin` beyond its support.
RoundTrip round_trip(const ContinuumBasis& basis, const std::vector<BoundState>& states,
                     const TestFunction& f, double margin = 1.0);

struct Comparison {
  Complex lhs;
  Complex rhs;
  double mismatch = 0.0;
};

/// lhs = int conj(f) g dr; rhs = sum conj(c_n^f) c_n^g + sum_j W_j conj(f^_j) g^_j.
/// mismatch = |lhs - rhs| / (|f| |g|), 0 when either norm vanishes.
Comparison parseval(const ContinuumBasis& basis, const std::vector<BoundState>& states,
                    const TestFunction& f, const TestFunction& g);
/// Same with h^m g on the left and E^m weights on the right; mismatch is
/// relative to |lhs|.
Comparison matrix_element_h_power(const ContinuumBasis& basis,
                                  const std::vector<BoundState>& states,
                                  const TestFunction& f, const TestFunction& g, int m);

/// sqrt(int |(1+r)^n (h+1)^m f|^2 dr).
double norm_nm(const PotentialSpec& spec, const TestFunction& f, int n, int m);

struct NormTable {
  int n_max = 3;
  std::vector<std::vector<double>> value;  // value[n][m]
};
NormTable norm_table(const PotentialSpec& spec, const TestFunction& f, int n_max = 3);

struct MembershipCheck {
  std::string condition;
  double measured = 0.0;
  bool pass = false;
};
struct MembershipReport {
  std::vector<MembershipCheck> checks;
  bool pass() const;
};

/// h^m f(0) = 0 for m <= m_max, f^(n)(a) = f^(n)(b) = 0 for n <= n_max (both
/// sides), and finite norms for n <= n_max, m <= m_max. Report only.
MembershipReport phi_membership(const PotentialSpec& spec, const TestFunction& f,
                                int n_max = 3, int m_max = 3);

struct FunctionalBound {
  double lhs = 0.0;  // |<f|E>|
  double rhs = 0.0;  // sup_r |phi(r;E)| * |f|_{1,0}
  bool holds = false;
};
FunctionalBound functional_bound_check(const PotentialSpec& spec, const TestFunction& f,
                                       double e);

/// f^(k) = int f(r) <r|k> dr at each k > 0.
std::vector<Complex> momentum_forward(const PotentialSpec& spec, const TestFunction& f,
                                      const std::vector<double>& k, double k_max = 0.0);

}  // namespace rigged
