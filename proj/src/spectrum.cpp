#include "rigged/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "rigged/coeffs.hpp"
#include "rigged/eigenfunctions.hpp"
#include "rigged/errors.hpp"
#include "rigged/quadrature.hpp"

namespace rigged {

namespace {

const Complex kI(0.0, 1.0);
constexpr double kPi = std::numbers::pi;

Complex tilde_j3(const PotentialSpec& spec, double e) {
  return tilde_j(spec, Energy{e})[2];
}

double scan_root_function(const PotentialSpec& spec, double kappa) {
  return tilde_j3(spec, -kappa * kappa / spec.c).real();
}

struct Bracket {
  double lo, hi;
};

std::vector<Bracket> sign_changes(const PotentialSpec& spec, double lo, double hi,
                                  int samples, double* scale) {
  std::vector<Bracket> out;
  double prev_x = lo;
  double prev = scan_root_function(spec, lo);
  *scale = std::abs(prev);
  for (int i = 1; i < samples; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / (samples - 1);
    const double g = scan_root_function(spec, x);
    *scale = std::max(*scale, std::abs(g));
    if (g == 0.0) {
      out.push_back({x, x});
    } else if ((prev < 0.0 && g > 0.0) || (prev > 0.0 && g < 0.0)) {
      out.push_back({prev_x, x});
    }
    prev = g;
    prev_x = x;
  }
  return out;
}

// Richardson-extrapolated central difference with steps h and h/2.
template <typename F>
Complex richardson_derivative(F&& f, Complex x, Complex h) {
  const Complex d1 = (f(x + h) - f(x - h)) / (2.0 * h);
  const Complex d2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace

double rho(const PotentialSpec& spec, double e) {
  const WaveNumbers w = wavenumbers(spec, Energy{e});
  const Complex j4 = j(spec, w)[3];
  return (spec.c / w.k.real()) / (4.0 * kPi * std::norm(j4));
}

std::vector<BoundState> find_bound_states(const PotentialSpec& spec,
                                          const BoundStateSearch& opts) {
  const double lo = 1e-8;
  const double hi = std::sqrt(spec.c * spec.v1) - 1e-8;
  std::vector<BoundState> states;
  if (!(hi > lo)) return states;

  int samples = opts.initial_samples;
  double scale = 0.0;
  auto brackets = sign_changes(spec, lo, hi, samples, &scale);
  for (;;) {
    if (samples * 2 > opts.max_samples) {
      std::ostringstream msg;
      msg << "bound-state scan did not stabilise up to " << opts.max_samples
          << " samples";
      throw ScanTooCoarse(msg.str());
    }
    samples *= 2;
    double finer_scale = 0.0;
    auto finer = sign_changes(spec, lo, hi, samples, &finer_scale);
    scale = std::max(scale, finer_scale);
    const bool stable = finer.size() == brackets.size();
    brackets = std::move(finer);
    if (stable) break;
  }

  const double tol = opts.kappa_tol;
  for (const Bracket& br : brackets) {
    double kappa = br.lo;
    if (br.hi > br.lo) {
      std::uintmax_t iters = 200;
      auto g = [&](double x) { return scan_root_function(spec, x); };
      auto stop = [tol](double x0, double x1) { return std::abs(x1 - x0) < tol; };
      const auto [r0, r1] =
          boost::math::tools::toms748_solve(g, br.lo, br.hi, stop, iters);
      kappa = 0.5 * (r0 + r1);
    }
    const double e = -kappa * kappa / spec.c;
    const Complex j3 = tilde_j3(spec, e);
    if (std::abs(j3.imag()) > 1e-8 * scale) {
      throw NoConvergence("J~3 is not real at a bound-state root");
    }
    BoundState st;
    st.energy = e;
    st.kappa = kappa;
    states.push_back(st);
  }

  std::sort(states.begin(), states.end(),
            [](const BoundState& x, const BoundState& y) { return x.energy < y.energy; });
  for (std::size_t i = 0; i < states.size(); ++i) {
    states[i].n = static_cast<int>(i) + 1;
    states[i].n_norm = residue_normalization(spec, states[i]);
  }
  return states;
}

double integral_normalization(const PotentialSpec& spec, const BoundState& state) {
  const auto w = PiecewiseWave::make(spec, Family::theta_tilde, Energy{state.energy});
  const std::vector<double> breaks = {0.0, spec.a, spec.b,
                                      truncation_radius(spec, state.kappa)};
  const double integral = quad::integrate_adaptive(
      quad::RealFn([&](double r) { return std::pow(w.eval(r).real(), 2); }), breaks, 1e-13);
  return 1.0 / std::sqrt(integral);
}

double residue_normalization(const PotentialSpec& spec, const BoundState& state) {
  const double e = state.energy;
  const double h = 1e-5 * std::max(1.0, std::abs(e));
  auto f = [&](Complex x) { return tilde_j(spec, Energy{x}).c[2]; };
  const Complex dj3 = richardson_derivative(f, Complex(e), Complex(h));
  const CoefficientQuad q = tilde_j(spec, Energy{e});
  if (std::abs(dj3) * std::max(1.0, std::abs(e)) < 1e-8 * std::abs(q[3])) {
    throw DegenerateRoot("J~3' vanishes at the bound-state energy");
  }
  const double kappa = std::sqrt(-spec.c * e);
  const Complex n2 = -(spec.c / (2.0 * kappa)) * q[3] / dj3;
  if (!(n2.real() > 0.0)) {
    throw NoConvergence("non-positive residue normalisation");
  }
  return std::sqrt(n2.real());
}

DirectNormalization direct_normalization(const PotentialSpec& spec,
                                         const BoundState& state) {
  DirectNormalization out;
  const Complex kn(0.0, state.kappa);

  const auto theta = PiecewiseWave::make(spec, Family::theta_plus, Momentum{kn});
  const double radius = truncation_radius(spec, state.kappa);
  const std::vector<double> breaks = {0.0, spec.a, spec.b,
                                      spec.b + 0.5 * (radius - spec.b), radius};
  auto sq = [&](double r) { return std::pow(theta.eval(r).real(), 2); };
  const double tail = std::exp(-2.0 * state.kappa * radius) / (2.0 * state.kappa);
  out.theta_plus_integral = quad::integrate_adaptive(quad::RealFn(sq), breaks, 1e-13) + tail;

  // Trapezoid rule on a small circle: exact for the pole term.
  const double radius_c = 1e-4;
  const int points = 64;
  std::vector<Complex> terms;
  for (int i = 0; i < points; ++i) {
    const Complex step = radius_c * std::exp(kI * (2.0 * kPi * i / points));
    terms.push_back(s_matrix(spec, kn + step) * step);
  }
  out.residue_contour =
      quad::pairwise_sum(std::span<const Complex>(terms)) / static_cast<double>(points);

  // Differentiate along the imaginary axis so q1 stays on one branch.
  auto j4 = [&](Complex k) { return j(spec, wavenumbers(spec, Momentum{k}))[3]; };
  const double h = 1e-5 * std::max(1.0, state.kappa);
  const Complex dj4 = richardson_derivative(j4, kn, Complex(0.0, h));
  const Complex j3 = j(spec, wavenumbers(spec, Momentum{kn}))[2];
  out.residue_derivative = -j3 / dj4;

  out.contour_vs_derivative = std::abs(out.residue_contour - out.residue_derivative) /
                              std::abs(out.residue_contour);
  out.minus_i_over_residue = -kI / out.residue_contour;
  out.mismatch = std::abs(out.theta_plus_integral - out.minus_i_over_residue) /
                 std::abs(out.theta_plus_integral);
  return out;
}

ThetaMatrix theta_minus(const PotentialSpec& spec, Energy e) {
  const WaveNumbers w = wavenumbers(spec, e);
  const CoefficientQuad jt = tilde_j(spec, w);
  const Complex pre = -(spec.c / w.k_tilde) * 0.5;
  ThetaMatrix t;
  t.m[0][1] = pre;
  t.m[1][1] = pre * jt[3] / jt[2];
  return t;
}

ThetaMatrix theta_plus(const PotentialSpec& spec, Energy e) {
  const WaveNumbers w = wavenumbers(spec, e);
  const CoefficientQuad jq = j(spec, w);
  const CoefficientQuad cq = c_coeffs(spec, w);
  const Complex wr = jq[3] * cq[2] - jq[2] * cq[3];
  const Complex pre = (spec.c / w.k) / (2.0 * kI);
  ThetaMatrix t;
  if (e.value.imag() >= 0.0) {
    t.m[0][0] = pre * (-cq[3]) / (jq[3] * wr);
  } else {
    t.m[0][0] = -pre * cq[2] / (jq[2] * wr);
  }
  t.m[1][0] = pre / wr;
  return t;
}

namespace {

// Integrand of the boundary-value formula at finite eps.
double tk_integrand(const PotentialSpec& spec, double e, double eps, bool positive) {
  const Complex below(e, -eps);
  const Complex above(e, eps);
  Complex diff;
  if (positive) {
    diff = theta_plus(spec, Energy{below})(1, 1) - theta_plus(spec, Energy{above})(1, 1);
  } else {
    diff = theta_minus(spec, Energy{below})(2, 2) - theta_minus(spec, Energy{above})(2, 2);
  }
  return (diff / (2.0 * kPi * kI)).real();
}

// Poles of theta22^- inside (e1, e2): sign changes of Re J~3, bisected.
std::vector<double> poles_in_window(const PotentialSpec& spec, double e1, double e2) {
  std::vector<double> poles;
  const int samples = 2048;
  auto g = [&](double e) { return tilde_j3(spec, e).real(); };
  double prev_e = e1;
  double prev = g(e1);
  for (int i = 1; i <= samples; ++i) {
    const double e = e1 + (e2 - e1) * static_cast<double>(i) / samples;
    const double v = g(e);
    if ((prev < 0.0) != (v < 0.0)) {
      double lo = prev_e;
      double hi = e;
      double glo = prev;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((gm < 0.0) == (glo < 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      poles.push_back(0.5 * (lo + hi));
    }
    prev = v;
    prev_e = e;
  }
  return poles;
}

}  // namespace

TkResult tk_measure(const PotentialSpec& spec, double e1, double e2,
                    const TkOptions& opts) {
  const bool positive = e1 > 0.0 && e2 > e1;
  const bool negative = e2 < 0.0 && e1 < e2;
  if (!positive && !negative) {
    throw ValidationError("tk_measure window must lie inside (0,inf) or (-inf,0)");
  }
  std::vector<double> breaks = {e1};
  if (negative) {
    for (double p : poles_in_window(spec, e1, e2)) breaks.push_back(p);
  } else {
    // Keep the barrier threshold E = V2 a break point; the density has a kink there.
    if (spec.v2 > e1 && spec.v2 < e2) breaks.push_back(spec.v2);
  }
  breaks.push_back(e2);

  TkResult out;
  for (double eps : opts.eps) {
    auto f = [&](double e) { return tk_integrand(spec, e, eps, positive); };
    out.raw.push_back(quad::integrate_adaptive(quad::RealFn(f), breaks, 1e-12, 4000));
  }

  // Neville-Richardson table in powers of eps.
  const std::size_t n = out.raw.size();
  std::vector<std::vector<double>> table(n);
  for (std::size_t i = 0; i < n; ++i) {
    table[i].push_back(out.raw[i]);
    for (std::size_t m = 1; m <= i; ++m) {
      const double q = std::pow(opts.eps[i - m] / opts.eps[i], static_cast<double>(m));
      table[i].push_back((q * table[i][m - 1] - table[i - 1][m - 1]) / (q - 1.0));
    }
  }
  out.value = table[n - 1][n - 1];
  out.residual = n > 1 ? std::abs(out.value - table[n - 2][n - 2]) : 0.0;
  if (out.residual > opts.tolerance) {
    std::ostringstream msg;
    msg << "eps extrapolation residual " << out.residual << " exceeds "
        << opts.tolerance;
    throw NoConvergence(msg.str());
  }
  return out;
}

Complex jost(const PotentialSpec& spec, Complex k) {
  const Complex j4 = j(spec, wavenumbers(spec, Momentum{k}))[3];
  return -2.0 * kI * j4;
}

Complex regular_jost(const PotentialSpec& spec, Complex k) {
  const WaveNumbers w = wavenumbers(spec, Momentum{k});
  return k * j(spec, w)[3] / w.q1;
}

Complex s_matrix(const PotentialSpec& spec, double k) {
  return s_matrix(spec, Complex(k, 0.0));
}

Complex s_matrix(const PotentialSpec& spec, Complex k) {
  const CoefficientQuad q = j(spec, wavenumbers(spec, Momentum{k}));
  return -q[2] / q[3];
}

namespace {

double phase_step(Complex from, Complex to) { return std::arg(to / from); }

// Accumulated arg change of regular_jost along a segment, subdividing until
// each step turns by less than 0.3 rad.
double segment_winding(const PotentialSpec& spec, Complex z0, Complex z1,
                       Complex f0, Complex f1, int depth) {
  const double step = phase_step(f0, f1);
  if (std::abs(step) < 0.3 || depth > 40) return step;
  const Complex zm = 0.5 * (z0 + z1);
  const Complex fm = regular_jost(spec, zm);
  return segment_winding(spec, z0, zm, f0, fm, depth + 1) +
         segment_winding(spec, zm, z1, fm, f1, depth + 1);
}

double boundary_phase(const PotentialSpec& spec, const KRectangle& r) {
  const std::array<Complex, 4> corners = {
      Complex(r.re_min, r.im_min), Complex(r.re_max, r.im_min),
      Complex(r.re_max, r.im_max), Complex(r.re_min, r.im_max)};
  double total = 0.0;
  for (int side = 0; side < 4; ++side) {
    const Complex z0 = corners[side];
    const Complex z1 = corners[(side + 1) % 4];
    const int pieces = 64;
    Complex prev_z = z0;
    Complex prev_f = regular_jost(spec, z0);
    for (int i = 1; i <= pieces; ++i) {
      const Complex z = z0 + (z1 - z0) * (static_cast<double>(i) / pieces);
      const Complex f = regular_jost(spec, z);
      total += segment_winding(spec, prev_z, z, prev_f, f, 0);
      prev_z = z;
      prev_f = f;
    }
  }
  return total;
}

Complex newton_refine(const PotentialSpec& spec, Complex z) {
  for (int it = 0; it < 100; ++it) {
    const Complex h = 1e-6 * std::max(1.0, std::abs(z));
    const Complex f = regular_jost(spec, z);
    const Complex df = richardson_derivative(
        [&](Complex x) { return regular_jost(spec, x); }, z, h);
    const Complex dz = f / df;
    z -= dz;
    if (std::abs(dz) < 1e-14 * std::max(1.0, std::abs(z))) break;
  }
  return z;
}

void collect_zeros(const PotentialSpec& spec, const KRectangle& r, int count,
                   int depth, std::vector<Complex>& out) {
  if (count <= 0) return;
  if (count == 1) {
    const Complex guess(0.5 * (r.re_min + r.re_max), 0.5 * (r.im_min + r.im_max));
    const Complex z = newton_refine(spec, guess);
    if (z.real() >= r.re_min && z.real() <= r.re_max && z.imag() >= r.im_min &&
        z.imag() <= r.im_max) {
      out.push_back(z);
      return;
    }
  }
  if (depth > 40) {
    throw NoConvergence("Jost zero count/refine mismatch after max subdivision");
  }
  const double rm = 0.5 * (r.re_min + r.re_max);
  const double im = 0.5 * (r.im_min + r.im_max);
  const std::array<KRectangle, 4> parts = {
      KRectangle{r.re_min, rm, r.im_min, im}, KRectangle{rm, r.re_max, r.im_min, im},
      KRectangle{r.re_min, rm, im, r.im_max}, KRectangle{rm, r.re_max, im, r.im_max}};
  for (const auto& p : parts) {
    collect_zeros(spec, p, count_jost_zeros(spec, p), depth + 1, out);
  }
}

}  // namespace

int count_jost_zeros(const PotentialSpec& spec, const KRectangle& rect) {
  return static_cast<int>(std::lround(boundary_phase(spec, rect) / (2.0 * kPi)));
}

std::vector<Complex> find_jost_zeros(const PotentialSpec& spec,
                                     const KRectangle& rect) {
  if (!(rect.im_max < -1e-6) || !(rect.re_max > rect.re_min) ||
      !(rect.im_max > rect.im_min)) {
    throw ValidationError("rectangle must lie below Im k = -1e-6");
  }
  const int count = count_jost_zeros(spec, rect);
  std::vector<Complex> zeros;
  collect_zeros(spec, rect, count, 0, zeros);
  if (static_cast<int>(zeros.size()) != count) {
    throw NoConvergence("Jost zero count/refine mismatch");
  }
  std::sort(zeros.begin(), zeros.end(), [](Complex x, Complex y) {
    return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
  });
  return zeros;
}

}  // namespace rigged
