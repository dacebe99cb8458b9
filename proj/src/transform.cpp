#include "rigged/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include <boost/math/interpolators/cardinal_quintic_b_spline.hpp>
#include <boost/math/interpolators/makima.hpp>
#include <boost/math/special_functions/binomial.hpp>

#include "json.hpp"
#include "rigged/errors.hpp"
#include "rigged/parallel.hpp"

namespace rigged {

namespace {

constexpr int kBumpOrders = 16;
constexpr double kPi = std::numbers::pi;

using Poly = std::vector<double>;  // coefficients in t, ascending powers

Poly derivative(const Poly& p) {
  Poly out(p.size() > 1 ? p.size() - 1 : 1, 0.0);
  for (std::size_t i = 1; i < p.size(); ++i) out[i - 1] = static_cast<double>(i) * p[i];
  return out;
}

Poly multiply(const Poly& p, const Poly& q) {
  Poly out(p.size() + q.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += p[i] * q[j];
  }
  return out;
}

Poly add(Poly p, const Poly& q) {
  if (q.size() > p.size()) p.resize(q.size(), 0.0);
  for (std::size_t i = 0; i < q.size(); ++i) p[i] += q[i];
  return p;
}

double horner(const Poly& p, double t) {
  double s = 0.0;
  for (std::size_t i = p.size(); i-- > 0;) s = s * t + p[i];
  return s;
}

// d^n/dt^n exp(-1/u), u = 1 - t^2, equals p_n(t) / u^{2n} * exp(-1/u) with
// p_{n+1} = p_n' u^2 + 4 n t u p_n - 2 t p_n.
const std::vector<Poly>& bump_polys() {
  static const std::vector<Poly> polys = [] {
    std::vector<Poly> ps = {Poly{1.0}};
    const Poly u = {1.0, 0.0, -1.0};
    const Poly u2 = multiply(u, u);
    const Poly t = {0.0, 1.0};
    for (int n = 0; n < kBumpOrders; ++n) {
      const Poly& p = ps.back();
      Poly next = multiply(derivative(p), u2);
      Poly term = multiply(multiply(t, u), p);
      for (double& x : term) x *= 4.0 * n;
      next = add(next, term);
      Poly last = multiply(t, p);
      for (double& x : last) x *= -2.0;
      ps.push_back(add(next, last));
    }
    return ps;
  }();
  return polys;
}

std::vector<double> merge_kinks(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> out = x;
  out.insert(out.end(), y.begin(), y.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double effective_k_max(const PotentialSpec& spec, double k_max) {
  return k_max > 0.0 ? k_max : default_k_max(spec);
}

Complex weighted_dot(const quad::Grid& g, const std::function<Complex(double)>& f) {
  std::vector<Complex> terms(g.x.size());
  for (std::size_t i = 0; i < g.x.size(); ++i) terms[i] = g.w[i] * f(g.x[i]);
  return quad::pairwise_sum(std::span<const Complex>(terms));
}

double l2_norm(const quad::Grid& g, const std::function<Complex(double)>& f) {
  std::vector<double> terms(g.x.size());
  for (std::size_t i = 0; i < g.x.size(); ++i) terms[i] = g.w[i] * std::norm(f(g.x[i]));
  return std::sqrt(quad::pairwise_sum(std::span<const double>(terms)));
}

double binomial(int m, int j) {
  return boost::math::binomial_coefficient<double>(static_cast<unsigned>(m),
                                                   static_cast<unsigned>(j));
}

}  // namespace

TestFunction::TestFunction(std::string label, double lo, double hi, int max_order,
                           Derivative d, std::vector<double> kinks)
    : label_(std::move(label)),
      lo_(lo),
      hi_(hi),
      max_order_(max_order),
      d_(std::move(d)),
      kinks_(std::move(kinks)) {}

Complex TestFunction::derivative(double r, int order) const {
  if (order > max_order_) {
    std::ostringstream msg;
    msg << label_ << ": derivative order " << order << " exceeds " << max_order_;
    throw ValidationError(msg.str());
  }
  if (r < lo_ || r > hi_) return 0.0;
  return d_(r, order);
}

TestFunction bump(double lo, double hi, double amplitude) {
  if (!(hi > lo)) throw ValidationError("bump support must have lo < hi");
  const double scale = 2.0 / (hi - lo);
  auto d = [lo, hi, scale, amplitude](double r, int order) -> Complex {
    const double t = (2.0 * r - lo - hi) / (hi - lo);
    const double u = 1.0 - t * t;
    // exp(-1/u) underflows long before the polynomial factor matters.
    if (u < 1e-3) return 0.0;
    const double base = std::exp(-1.0 / u);
    const double poly = horner(bump_polys()[order], t);
    return amplitude * std::pow(scale, order) * poly * base / std::pow(u, 2 * order);
  };
  std::ostringstream label;
  label << "bump(" << lo << "," << hi << ")";
  return TestFunction(label.str(), lo, hi, kBumpOrders, d);
}

TestFunction r_exp(double cutoff) {
  auto d = [](double r, int order) -> Complex {
    const double sign = order % 2 == 0 ? 1.0 : -1.0;
    return sign * (r - order) * std::exp(-r);
  };
  return TestFunction("r*exp(-r)", 0.0, cutoff, kBumpOrders, d);
}

TestFunction bound_state(const PotentialSpec& spec, const BoundState& state) {
  auto phi = std::make_shared<BoundStateFunction>(spec, state);
  auto d = [phi](double r, int order) -> Complex { return phi->derivative(r, order); };
  std::ostringstream label;
  label << "bound:" << state.n;
  return TestFunction(label.str(), 0.0, truncation_radius(spec, state.kappa), kBumpOrders, d,
                      {spec.a, spec.b});
}

TestFunction sampled(std::vector<double> r, std::vector<Complex> values) {
  if (r.size() != values.size() || r.size() < 4) {
    throw ValidationError("sampled function needs at least 4 (r, value) pairs");
  }
  for (std::size_t i = 1; i < r.size(); ++i) {
    if (!(r[i] > r[i - 1])) throw ValidationError("sample radii must be strictly ascending");
  }
  const double lo = r.front();
  const double hi = r.back();
  const double h = (hi - lo) / static_cast<double>(r.size() - 1);
  bool uniform = true;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (std::abs(r[i] - (lo + h * i)) > 1e-9 * std::max(1.0, std::abs(r[i]))) uniform = false;
  }
  std::vector<double> re(values.size()), im(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    re[i] = values[i].real();
    im[i] = values[i].imag();
  }
  if (uniform) {
    using boost::math::interpolators::cardinal_quintic_b_spline;
    auto sre = std::make_shared<cardinal_quintic_b_spline<double>>(
        re.data(), re.size(), lo, h, std::pair{0.0, 0.0}, std::pair{0.0, 0.0});
    auto sim = std::make_shared<cardinal_quintic_b_spline<double>>(
        im.data(), im.size(), lo, h, std::pair{0.0, 0.0}, std::pair{0.0, 0.0});
    auto d = [sre, sim](double x, int order) -> Complex {
      switch (order) {
        case 0: return {(*sre)(x), (*sim)(x)};
        case 1: return {sre->prime(x), sim->prime(x)};
        default: return {sre->double_prime(x), sim->double_prime(x)};
      }
    };
    return TestFunction("samples", lo, hi, 2, d);
  }
  using boost::math::interpolators::makima;
  auto sre = std::make_shared<makima<std::vector<double>>>(std::vector<double>(r),
                                                            std::move(re));
  auto sim = std::make_shared<makima<std::vector<double>>>(std::move(r), std::move(im));
  auto d = [sre, sim](double x, int order) -> Complex {
    if (order == 0) return {(*sre)(x), (*sim)(x)};
    return {sre->prime(x), sim->prime(x)};
  };
  return TestFunction("samples", lo, hi, 1, d);
}

TestFunction combine(Complex alpha, const TestFunction& f, Complex beta,
                     const TestFunction& g) {
  auto d = [alpha, beta, f, g](double r, int order) -> Complex {
    return alpha * f.derivative(r, order) + beta * g.derivative(r, order);
  };
  std::ostringstream label;
  label << "(" << alpha << ")*" << f.label() << "+(" << beta << ")*" << g.label();
  return TestFunction(label.str(), std::min(f.lo(), g.lo()), std::max(f.hi(), g.hi()),
                      std::min(f.max_order(), g.max_order()), d,
                      merge_kinks(merge_kinks(f.kinks(), g.kinks()),
                                  {f.lo(), f.hi(), g.lo(), g.hi()}));
}

TestFunction apply_h(const PotentialSpec& spec, const TestFunction& f) {
  if (f.max_order() < 2) throw ValidationError(f.label() + ": h needs two derivatives");
  auto d = [spec, f](double r, int order) -> Complex {
    return -f.derivative(r, order + 2) / spec.c + spec.potential(r) * f.derivative(r, order);
  };
  return TestFunction("h " + f.label(), f.lo(), f.hi(), f.max_order() - 2, d,
                      merge_kinks(f.kinks(), {spec.a, spec.b}));
}

Complex apply_h_power(const PotentialSpec& spec, const TestFunction& f, int m, double r) {
  const double v = spec.potential(r);
  Complex sum = 0.0;
  for (int j = 0; j <= m; ++j) {
    sum += binomial(m, j) * std::pow(-1.0 / spec.c, j) * std::pow(v, m - j) *
           f.derivative(r, 2 * j);
  }
  return sum;
}

double default_k_max(const PotentialSpec& spec) {
  return std::max(12.0, 6.0 * std::sqrt(spec.c * (spec.v1 + spec.v2))) /
         std::min(1.0, spec.a);
}

EnergyGrid k_gauss_grid(const PotentialSpec& spec, int nodes, double k_max) {
  if (nodes < 2) throw ValidationError("energy grid needs at least 2 nodes");
  EnergyGrid g;
  g.k_max = effective_k_max(spec, k_max);
  const quad::Rule& rule = quad::gauss_legendre(nodes);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double k = 0.5 * g.k_max * (rule.nodes[i] + 1.0);
    const double wk = 0.5 * g.k_max * rule.weights[i];
    g.k.push_back(k);
    g.k_weight.push_back(wk);
    g.e.push_back(k * k / spec.c);
    g.weight.push_back(wk * 2.0 * k / spec.c);
  }
  return g;
}

ContinuumBasis::ContinuumBasis(const PotentialSpec& spec, EnergyGrid grid)
    : spec_(spec), grid_(std::move(grid)) {
  std::vector<std::optional<ContinuumEigenfunction>> built(grid_.e.size());
  parallel_for(built.size(), [&](std::size_t j) {
    const double e = grid_.e[j];
    try {
      built[j].emplace(spec_, e);
    } catch (const SingularEnergy&) {
      // A node exactly on the barrier threshold: shift it off along the axis.
      built[j].emplace(spec_, e + 1e-9 * (1.0 + e));
    }
  });
  phi_.reserve(built.size());
  for (auto& b : built) phi_.push_back(std::move(*b));
}

quad::Grid r_grid(const PotentialSpec& spec, double lo, double hi, double k_max,
                  const std::vector<double>& kinks) {
  std::vector<double> breaks = {lo, hi};
  for (double x : merge_kinks(kinks, {spec.a, spec.b})) {
    if (x > lo && x < hi) breaks.push_back(x);
  }
  std::sort(breaks.begin(), breaks.end());
  const double panel = std::min(0.25, 2.0 * kPi / k_max);
  return quad::composite(breaks, 32, panel);
}

quad::Grid r_grid(const PotentialSpec& spec, const TestFunction& f, double k_max) {
  return r_grid(spec, f.lo(), f.hi(), effective_k_max(spec, k_max), f.kinks());
}

std::vector<Complex> forward_bound(const PotentialSpec& spec,
                                   const std::vector<BoundState>& states,
                                   const TestFunction& f, double k_max) {
  const quad::Grid g = r_grid(spec, f, k_max);
  std::vector<Complex> out;
  for (const BoundState& st : states) {
    const BoundStateFunction phi(spec, st);
    out.push_back(weighted_dot(g, [&](double r) { return phi(r) * f(r); }));
  }
  return out;
}

std::vector<Complex> forward_continuum(const ContinuumBasis& basis, const TestFunction& f) {
  const quad::Grid g = r_grid(basis.spec(), f, basis.grid().k_max);
  std::vector<Complex> fw(g.x.size());
  for (std::size_t i = 0; i < g.x.size(); ++i) fw[i] = g.w[i] * f(g.x[i]);
  std::vector<Complex> out(basis.size());
  parallel_for(basis.size(), [&](std::size_t j) {
    const ContinuumEigenfunction& phi = basis[j];
    std::vector<Complex> terms(g.x.size());
    for (std::size_t i = 0; i < g.x.size(); ++i) terms[i] = fw[i] * phi(g.x[i]);
    out[j] = quad::pairwise_sum(std::span<const Complex>(terms));
  });
  return out;
}

std::vector<Complex> inverse_continuum(const ContinuumBasis& basis,
                                       const std::vector<Complex>& fhat,
                                       const std::vector<double>& r) {
  if (fhat.size() != basis.size()) {
    throw ValidationError("continuum samples do not match the energy grid");
  }
  std::vector<Complex> weighted(fhat.size());
  for (std::size_t j = 0; j < fhat.size(); ++j) weighted[j] = basis.grid().weight[j] * fhat[j];
  std::vector<Complex> out(r.size());
  parallel_for(r.size(), [&](std::size_t i) {
    std::vector<Complex> terms(basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) terms[j] = weighted[j] * basis[j](r[i]);
    out[i] = quad::pairwise_sum(std::span<const Complex>(terms));
  });
  return out;
}

DecomposedState decompose(const ContinuumBasis& basis, const std::vector<BoundState>& states,
                          const TestFunction& f) {
  DecomposedState d;
  d.bound = forward_bound(basis.spec(), states, f, basis.grid().k_max);
  d.grid = basis.grid();
  d.continuum = forward_continuum(basis, f);
  return d;
}

std::vector<Complex> reconstruct(const ContinuumBasis& basis,
                                 const std::vector<BoundState>& states,
                                 const DecomposedState& d, const std::vector<double>& r) {
  std::vector<Complex> out = inverse_continuum(basis, d.continuum, r);
  for (std::size_t n = 0; n < states.size() && n < d.bound.size(); ++n) {
    const BoundStateFunction phi(basis.spec(), states[n]);
    for (std::size_t i = 0; i < r.size(); ++i) out[i] += d.bound[n] * phi(r[i]);
  }
  return out;
}

std::string to_json(const DecomposedState& d, int indent) {
  nlohmann::ordered_json j;
  j["bound"] = nlohmann::ordered_json::array();
  for (std::size_t n = 0; n < d.bound.size(); ++n) {
    j["bound"].push_back({{"n", n + 1}, {"re", d.bound[n].real()}, {"im", d.bound[n].imag()}});
  }
  nlohmann::ordered_json c;
  c["grid"] = "k-gauss-legendre";
  c["k_max"] = d.grid.k_max;
  c["nodes"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < d.continuum.size(); ++i) {
    c["nodes"].push_back(
        {{"e", d.grid.e[i]}, {"re", d.continuum[i].real()}, {"im", d.continuum[i].imag()}});
  }
  j["continuum"] = std::move(c);
  return j.dump(indent);
}

RoundTrip round_trip(const ContinuumBasis& basis, const std::vector<BoundState>& states,
                     const TestFunction& f, double margin) {
  const quad::Grid g = r_grid(basis.spec(), std::max(0.0, f.lo() - margin), f.hi() + margin,
                              basis.grid().k_max, f.kinks());
  const DecomposedState d = decompose(basis, states, f);
  const std::vector<Complex> rec = reconstruct(basis, states, d, g.x);
  std::vector<double> err(g.x.size()), nrm(g.x.size());
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    err[i] = g.w[i] * std::norm(f(g.x[i]) - rec[i]);
    nrm[i] = g.w[i] * std::norm(f(g.x[i]));
  }
  RoundTrip out;
  out.error = std::sqrt(quad::pairwise_sum(std::span<const double>(err)));
  out.norm = std::sqrt(quad::pairwise_sum(std::span<const double>(nrm)));
  out.relative = out.norm > 0.0 ? out.error / out.norm : 0.0;
  return out;
}

namespace {

Complex spectral_side(const ContinuumBasis& basis, const std::vector<BoundState>& states,
                      const TestFunction& f, const TestFunction& g, int m) {
  const auto bf = forward_bound(basis.spec(), states, f, basis.grid().k_max);
  const auto bg = forward_bound(basis.spec(), states, g, basis.grid().k_max);
  const auto cf = forward_continuum(basis, f);
  const auto cg = forward_continuum(basis, g);
  std::vector<Complex> terms;
  for (std::size_t n = 0; n < states.size(); ++n) {
    terms.push_back(std::pow(states[n].energy, m) * std::conj(bf[n]) * bg[n]);
  }
  for (std::size_t j = 0; j < cf.size(); ++j) {
    terms.push_back(basis.grid().weight[j] * std::pow(basis.grid().e[j], m) *
                    std::conj(cf[j]) * cg[j]);
  }
  return quad::pairwise_sum(std::span<const Complex>(terms));
}

quad::Grid joint_grid(const ContinuumBasis& basis, const TestFunction& f,
                      const TestFunction& g) {
  return r_grid(basis.spec(), std::min(f.lo(), g.lo()), std::max(f.hi(), g.hi()),
                basis.grid().k_max,
                merge_kinks(merge_kinks(f.kinks(), g.kinks()), {f.lo(), f.hi(), g.lo(), g.hi()}));
}

}  // namespace

Comparison parseval(const ContinuumBasis& basis, const std::vector<BoundState>& states,
                    const TestFunction& f, const TestFunction& g) {
  const quad::Grid grid = joint_grid(basis, f, g);
  Comparison out;
  out.lhs = weighted_dot(grid, [&](double r) { return std::conj(f(r)) * g(r); });
  out.rhs = spectral_side(basis, states, f, g, 0);
  const double scale = l2_norm(grid, [&](double r) { return f(r); }) *
                       l2_norm(grid, [&](double r) { return g(r); });
  out.mismatch = scale > 0.0 ? std::abs(out.lhs - out.rhs) / scale : 0.0;
  return out;
}

Comparison matrix_element_h_power(const ContinuumBasis& basis,
                                  const std::vector<BoundState>& states,
                                  const TestFunction& f, const TestFunction& g, int m) {
  const quad::Grid grid = joint_grid(basis, f, g);
  Comparison out;
  out.lhs = weighted_dot(grid, [&](double r) {
    return std::conj(f(r)) * apply_h_power(basis.spec(), g, m, r);
  });
  out.rhs = spectral_side(basis, states, f, g, m);
  const double scale = std::abs(out.lhs);
  out.mismatch = scale > 0.0 ? std::abs(out.lhs - out.rhs) / scale : std::abs(out.rhs);
  return out;
}

double norm_nm(const PotentialSpec& spec, const TestFunction& f, int n, int m) {
  std::vector<double> breaks = {f.lo(), f.hi()};
  for (double x : merge_kinks(f.kinks(), {spec.a, spec.b})) {
    if (x > f.lo() && x < f.hi()) breaks.push_back(x);
  }
  std::sort(breaks.begin(), breaks.end());
  auto integrand = [&](double r) -> Complex {
    Complex hm = 0.0;
    for (int j = 0; j <= m; ++j) hm += binomial(m, j) * apply_h_power(spec, f, j, r);
    return std::norm(std::pow(1.0 + r, n) * hm);
  };
  const Complex total = quad::integrate_doubling(integrand, breaks, 1e-12, 12);
  return std::sqrt(total.real());
}

NormTable norm_table(const PotentialSpec& spec, const TestFunction& f, int n_max) {
  NormTable t;
  t.n_max = n_max;
  t.value.assign(n_max + 1, std::vector<double>(n_max + 1, 0.0));
  for (int n = 0; n <= n_max; ++n) {
    for (int m = 0; m <= n_max; ++m) t.value[n][m] = norm_nm(spec, f, n, m);
  }
  return t;
}

bool MembershipReport::pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const MembershipCheck& c) { return c.pass; });
}

MembershipReport phi_membership(const PotentialSpec& spec, const TestFunction& f, int n_max,
                                int m_max) {
  MembershipReport report;
  const double scale = std::max(1.0, norm_nm(spec, f, 0, 0));
  const double tol = 1e-8 * scale;
  auto unavailable = [&](const std::string& name) {
    report.checks.push_back({name + " (order unavailable)", std::nan(""), false});
  };
  for (int m = 0; m <= m_max; ++m) {
    const std::string name = "h^" + std::to_string(m) + " f(0) = 0";
    if (2 * m > f.max_order()) {
      unavailable(name);
      continue;
    }
    const double v = std::abs(apply_h_power(spec, f, m, 0.0));
    report.checks.push_back({name, v, v <= tol});
  }
  for (auto [tag, x] : {std::pair{"a", spec.a}, std::pair{"b", spec.b}}) {
    for (int n = 0; n <= n_max; ++n) {
      const std::string name = "f^(" + std::to_string(n) + ")(" + tag + ") = 0";
      if (n > f.max_order()) {
        unavailable(name);
        continue;
      }
      const double right = std::nextafter(x, HUGE_VAL);
      const double v = std::max(std::abs(f.derivative(x, n)), std::abs(f.derivative(right, n)));
      report.checks.push_back({name, v, v <= tol});
    }
  }
  for (int n = 0; n <= n_max; ++n) {
    for (int m = 0; m <= m_max; ++m) {
      const std::string name =
          "|f|_{" + std::to_string(n) + "," + std::to_string(m) + "} finite";
      if (2 * m > f.max_order()) {
        unavailable(name);
        continue;
      }
      double v = std::nan("");
      try {
        v = norm_nm(spec, f, n, m);
      } catch (const NoConvergence&) {
      }
      report.checks.push_back({name, v, std::isfinite(v)});
    }
  }
  return report;
}

FunctionalBound functional_bound_check(const PotentialSpec& spec, const TestFunction& f,
                                       double e) {
  const ContinuumEigenfunction phi(spec, e);
  const double k_max = std::max(default_k_max(spec), 4.0 * std::sqrt(spec.c * e));
  const quad::Grid g = r_grid(spec, f, k_max);
  FunctionalBound out;
  out.lhs = std::abs(weighted_dot(g, [&](double r) { return f(r) * phi(r); }));
  out.rhs = phi.sup_abs() * norm_nm(spec, f, 1, 0);
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-6);
  return out;
}

std::vector<Complex> momentum_forward(const PotentialSpec& spec, const TestFunction& f,
                                      const std::vector<double>& k, double k_max) {
  double top = effective_k_max(spec, k_max);
  for (double x : k) top = std::max(top, x);
  const quad::Grid g = r_grid(spec, f, top);
  std::vector<Complex> fw(g.x.size());
  for (std::size_t i = 0; i < g.x.size(); ++i) fw[i] = g.w[i] * f(g.x[i]);
  std::vector<Complex> out(k.size());
  parallel_for(k.size(), [&](std::size_t j) {
    auto make = [&](double kj) { return PiecewiseWave::make(spec, Family::chi, Momentum{kj}); };
    std::optional<PiecewiseWave> built;
    try {
      built.emplace(make(k[j]));
    } catch (const SingularEnergy&) {
      built.emplace(make(k[j] * (1.0 + 1e-9)));
    }
    const PiecewiseWave& chi = *built;
    const Complex pre = 1.0 / branch_sqrt(2.0 * kPi * chi.quad()[2] * chi.quad()[3]);
    std::vector<Complex> terms(g.x.size());
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      terms[i] = fw[i] * (pre * chi.eval(g.x[i])).real();
    }
    out[j] = quad::pairwise_sum(std::span<const Complex>(terms));
  });
  return out;
}

}  // namespace rigged
