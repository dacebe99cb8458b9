#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/differentiation/autodiff.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "json.hpp"
#include "rigged/errors.hpp"
#include "rigged/transform.hpp"
#include "support.hpp"

using namespace rigged;

namespace {

const PotentialSpec kSpec{10.0, 4.0, 1.0, 2.0, 1.0};
constexpr double kKMax = 120.0;

const ContinuumBasis& basis() {
  static const ContinuumBasis b(kSpec, k_gauss_grid(kSpec, 2048, kKMax));
  return b;
}

const std::vector<BoundState>& states() {
  static const std::vector<BoundState> s = find_bound_states(kSpec);
  return s;
}

double gk_integral(const std::function<double(double)>& f, double lo, double hi, int pieces) {
  double total = 0.0;
  const double h = (hi - lo) / pieces;
  for (int i = 0; i < pieces; ++i) {
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, lo + i * h, lo + (i + 1) * h, 0, 0.0);
  }
  return total;
}

// Relative L2 distance between two sample sets under the energy weights.
double weighted_gap(const EnergyGrid& g, const std::vector<Complex>& x,
                    const std::vector<Complex>& y) {
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    num += g.weight[j] * std::norm(x[j] - y[j]);
    den += g.weight[j] * std::norm(y[j]);
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("bump derivatives agree with automatic differentiation") {
  using namespace boost::math::differentiation;
  const double lo = 2.3, hi = 4.1;
  const TestFunction f = bump(lo, hi, 1.5);
  for (double r : {2.4, 2.9, 3.2, 3.7, 4.05}) {
    auto x = make_fvar<double, 8>(r);
    auto t = (2.0 * x - lo - hi) / (hi - lo);
    auto y = 1.5 * exp(-1.0 / (1.0 - t * t));
    for (int n = 0; n <= 8; ++n) {
      const double want = y.derivative(n);
      CHECK(std::abs(f.derivative(r, n).real() - want) <= 1e-9 * std::max(1.0, std::abs(want)));
    }
  }
  CHECK(f(lo) == Complex(0.0));
  CHECK(f(hi + 1.0) == Complex(0.0));
  CHECK_THROWS_AS(f.derivative(3.0, 17), ValidationError);
}

TEST_CASE("h power expands in analytic derivatives") {
  const TestFunction f = bump(0.2, 0.9);
  const TestFunction hf = apply_h(kSpec, f);
  const TestFunction hhf = apply_h(kSpec, hf);
  for (double r : {0.3, 0.5, 0.8}) {
    CHECK(std::abs(apply_h_power(kSpec, f, 1, r) - hf(r)) < 1e-9 * std::abs(hf(r)) + 1e-12);
    CHECK(std::abs(apply_h_power(kSpec, f, 2, r) - hhf(r)) < 1e-9 * std::abs(hhf(r)) + 1e-12);
  }
}

TEST_CASE("energy grid uses the k substitution") {
  const EnergyGrid g = k_gauss_grid(kSpec, 64, 10.0);
  double sum_w = 0.0;
  for (std::size_t j = 0; j < g.k.size(); ++j) {
    CHECK(g.e[j] == doctest::Approx(g.k[j] * g.k[j] / kSpec.c));
    sum_w += g.weight[j];
  }
  CHECK(sum_w == doctest::Approx(100.0).epsilon(1e-13));
  CHECK(default_k_max(kSpec) == doctest::Approx(6.0 * std::sqrt(14.0)));
  CHECK(default_k_max({1.0, 0.0, 0.5, 1.0, 1.0}) == doctest::Approx(24.0));
}

TEST_CASE("forward_bound basics") {
  REQUIRE(states().size() == 1);
  const TestFunction phi1 = bound_state(kSpec, states()[0]);
  const auto c = forward_bound(kSpec, states(), phi1);
  CHECK(std::abs(c[0] - 1.0) < 1e-8);

  const auto tail = forward_bound(kSpec, states(), bump(12.0, 14.0));
  CHECK(std::abs(tail[0]) < 1e-8);

  const TestFunction f = bump(0.1, 0.9), g = bump(2.3, 4.0);
  const Complex alpha(0.7, -1.3);
  const auto lin = forward_bound(kSpec, states(), combine(alpha, f, 1.0, g));
  const auto cf = forward_bound(kSpec, states(), f);
  const auto cg = forward_bound(kSpec, states(), g);
  CHECK(std::abs(lin[0] - (alpha * cf[0] + cg[0])) < 1e-12);
}

TEST_CASE("free continuum transform matches the sine transform") {
  const PotentialSpec free = testing_support::free_spec();
  const EnergyGrid grid = k_gauss_grid(free, 96, 20.0);
  const ContinuumBasis fb(free, grid);
  const double lo = 0.2, hi = 3.0;
  const TestFunction b = bump(lo, hi);
  const TestFunction f("gauss*r*bump", lo, hi, 0, [&](double r, int) {
    return std::exp(-r * r) * r * b(r);
  });
  const auto fhat = forward_continuum(fb, f);
  for (std::size_t j = 0; j < grid.k.size(); j += 5) {
    const double k = grid.k[j];
    const double want =
        std::sqrt(free.c / (std::numbers::pi * k)) *
        gk_integral([&](double r) { return f(r).real() * std::sin(k * r); }, lo, hi, 64);
    CHECK(std::abs(fhat[j].real() - want) < 1e-8);
    CHECK(std::abs(fhat[j].imag()) < 1e-15);
  }
  // Inverse at a few radii against the oracle's own inverse sum.
  for (double r : {0.5, 1.3, 2.2}) {
    double want = 0.0;
    for (std::size_t j = 0; j < grid.k.size(); ++j) {
      const double k = grid.k[j];
      want += grid.weight[j] * fhat[j].real() * std::sqrt(free.c / (std::numbers::pi * k)) *
              std::sin(k * r);
    }
    const auto got = inverse_continuum(fb, fhat, {r});
    CHECK(std::abs(got[0].real() - want) < 1e-8);
  }
}

TEST_CASE("zero maps to zero") {
  const TestFunction zero = bump(2.5, 4.0, 0.0);
  for (const Complex v : forward_continuum(basis(), zero)) CHECK(v == Complex(0.0));
  const std::vector<Complex> none(basis().size(), 0.0);
  for (const Complex v : inverse_continuum(basis(), none, {0.5, 1.5, 3.0})) {
    CHECK(v == Complex(0.0));
  }
  const DecomposedState d = decompose(basis(), states(), zero);
  for (const Complex v : reconstruct(basis(), states(), d, {0.5, 3.0})) CHECK(v == Complex(0.0));
  CHECK(round_trip(basis(), states(), zero).relative == 0.0);
}

TEST_CASE("h acts as multiplication by E") {
  for (const TestFunction& f : {bump(2.3, 5.8), bump(0.1, 0.9)}) {
    const auto fhat = forward_continuum(basis(), f);
    const auto hfhat = forward_continuum(basis(), apply_h(kSpec, f));
    std::vector<Complex> efhat(fhat.size());
    for (std::size_t j = 0; j < fhat.size(); ++j) efhat[j] = basis().grid().e[j] * fhat[j];
    CHECK(weighted_gap(basis().grid(), hfhat, efhat) < 1e-6);
  }
}

TEST_CASE("round trip and Parseval on wide far-region bumps") {
  for (const TestFunction& f : {bump(2.3, 5.8), bump(2.5, 6.5), bump(3.0, 7.0)}) {
    CAPTURE(f.label());
    CHECK(round_trip(basis(), states(), f).relative < 1e-6);
    CHECK(parseval(basis(), states(), f, f).mismatch < 1e-6);
  }
}

TEST_CASE("bound state lies in the discrete sector") {
  const TestFunction phi1 = bound_state(kSpec, states()[0]);
  const DecomposedState d = decompose(basis(), states(), phi1);
  CHECK(std::abs(d.bound[0] - 1.0) < 1e-8);
  double worst = 0.0;
  for (const Complex v : d.continuum) worst = std::max(worst, std::abs(v));
  CHECK(worst < 1e-6);
  CHECK(round_trip(basis(), states(), phi1).relative < 1e-8);
  const Comparison p = parseval(basis(), states(), phi1, phi1);
  CHECK(std::abs(p.lhs - 1.0) < 1e-6);
  CHECK(std::abs(p.rhs - 1.0) < 1e-6);
}

TEST_CASE("far bump has a negligible bound coefficient") {
  const DecomposedState d = decompose(basis(), states(), bump(8.0, 11.0));
  CHECK(std::abs(d.bound[0]) < 1e-6);
}

TEST_CASE("disjoint supports are orthogonal on both sides") {
  const Comparison p = parseval(basis(), states(), bump(2.5, 4.5), bump(5.0, 7.0));
  CHECK(std::abs(p.lhs) < 1e-8);
  CHECK(std::abs(p.rhs) < 1e-8);
}

TEST_CASE("matrix elements of h powers") {
  const TestFunction f = bump(2.3, 5.8);
  const Comparison m0 = matrix_element_h_power(basis(), states(), f, f, 0);
  const Comparison p = parseval(basis(), states(), f, f);
  CHECK(std::abs(m0.lhs - p.lhs) < 1e-14 * std::abs(p.lhs));
  CHECK(std::abs(m0.rhs - p.rhs) < 1e-14 * std::abs(p.rhs));

  const Comparison m1 = matrix_element_h_power(basis(), states(), f, f, 1);
  CHECK(std::abs(m1.lhs.imag()) < 1e-8);
  CHECK(std::abs(m1.rhs.imag()) < 1e-8);
  CHECK(m1.mismatch < 1e-5);
  CHECK(matrix_element_h_power(basis(), states(), f, f, 2).mismatch < 1e-4);
  CHECK(matrix_element_h_power(basis(), states(), f, bump(3.0, 7.0), 2).mismatch < 1e-4);
}

TEST_CASE("continuum reconstruction has no bound component") {
  const TestFunction f = combine(1.0, bump(0.1, 0.9), 1.0, bump(2.3, 5.8));
  const auto fhat = forward_continuum(basis(), f);
  const quad::Grid g = r_grid(kSpec, 0.0, 16.0, kKMax);
  const auto fc = inverse_continuum(basis(), fhat, g.x);
  const BoundStateFunction phi(kSpec, states()[0]);
  Complex overlap = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) overlap += g.w[i] * phi(g.x[i]) * fc[i];
  CHECK(std::abs(overlap) < 1e-6);
}

TEST_CASE("Gaussian energy packets realise delta normalisation") {
  const EnergyGrid grid = k_gauss_grid(kSpec, 1024, 6.0);
  const ContinuumBasis b(kSpec, grid);
  const double e0 = 8.0;
  auto packet = [&](double sigma) {
    std::vector<Complex> g(grid.e.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double x = (grid.e[j] - e0) / sigma;
      g[j] = std::exp(-0.5 * x * x) / std::pow(std::numbers::pi * sigma * sigma, 0.25);
    }
    return g;
  };
  const std::vector<double> breaks = {0.0, kSpec.a, kSpec.b, 120.0};
  const quad::Grid rg = quad::composite(breaks, 24, 0.5);
  const double sigmas[] = {1.0, 0.5, 0.3};
  std::vector<std::vector<Complex>> waves;
  for (double s : sigmas) waves.push_back(inverse_continuum(b, packet(s), rg.x));
  for (std::size_t p = 0; p < 3; ++p) {
    for (std::size_t q = p; q < 3; ++q) {
      Complex ov = 0.0;
      for (std::size_t i = 0; i < rg.x.size(); ++i) {
        ov += rg.w[i] * std::conj(waves[p][i]) * waves[q][i];
      }
      const double sp = sigmas[p], sq = sigmas[q];
      const double want = std::sqrt(2.0 * sp * sq / (sp * sp + sq * sq));
      CAPTURE(sp);
      CAPTURE(sq);
      CHECK(std::abs(ov - want) < 1e-6);
    }
  }
}

TEST_CASE("membership report") {
  const MembershipReport far = phi_membership(kSpec, bump(kSpec.b + 0.1, kSpec.b + 2.0));
  CHECK(far.pass());
  const MembershipReport well = phi_membership(kSpec, bump(0.2, 0.8));
  CHECK(well.pass());

  auto fails_at_edges = [](const MembershipReport& r) {
    bool edge_failure = false;
    for (const auto& c : r.checks) {
      if ((c.condition.find("(a)") != std::string::npos ||
           c.condition.find("(b)") != std::string::npos) &&
          !c.pass) {
        edge_failure = true;
      }
    }
    return edge_failure;
  };
  const MembershipReport rexp = phi_membership(kSpec, r_exp());
  CHECK_FALSE(rexp.pass());
  CHECK(fails_at_edges(rexp));
  const MembershipReport bound = phi_membership(kSpec, bound_state(kSpec, states()[0]));
  CHECK_FALSE(bound.pass());
  CHECK(fails_at_edges(bound));
}

TEST_CASE("weighted norms") {
  const TestFunction f = bump(2.4, 4.4);
  double l2 = 0.0;
  const quad::Grid g = r_grid(kSpec, f, 60.0);
  for (std::size_t i = 0; i < g.x.size(); ++i) l2 += g.w[i] * std::norm(f(g.x[i]));
  CHECK(norm_nm(kSpec, f, 0, 0) == doctest::Approx(std::sqrt(l2)).epsilon(1e-10));

  const NormTable t = norm_table(kSpec, f);
  REQUIRE(t.value.size() == 4);
  for (const auto& row : t.value) {
    for (double v : row) CHECK((std::isfinite(v) && v >= 0.0));
  }

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double lo1 = 0.05 + 5.0 * u(rng), lo2 = 0.05 + 5.0 * u(rng);
    const TestFunction p = bump(lo1, lo1 + 0.5 + 2.0 * u(rng), 0.2 + u(rng));
    const TestFunction q = bump(lo2, lo2 + 0.5 + 2.0 * u(rng), 0.2 + u(rng));
    const Complex alpha(2.0 * u(rng) - 1.0, 2.0 * u(rng) - 1.0);
    const TestFunction sum = combine(1.0, p, 1.0, q);
    const TestFunction scaled = combine(alpha, p, 0.0, q);
    for (int n = 0; n <= 1; ++n) {
      for (int m = 0; m <= 1; ++m) {
        const double np = norm_nm(kSpec, p, n, m), nq = norm_nm(kSpec, q, n, m);
        CHECK(norm_nm(kSpec, sum, n, m) <= (np + nq) * (1.0 + 1e-10));
        CHECK(norm_nm(kSpec, scaled, n, m) == doctest::Approx(std::abs(alpha) * np).epsilon(1e-9));
        CHECK(np > 0.0);
      }
    }
    const TestFunction hp = apply_h(kSpec, p);
    for (int n = 0; n <= 2; ++n) {
      for (int m = 0; m <= 2; ++m) {
        CHECK(norm_nm(kSpec, hp, n, m) <=
              (norm_nm(kSpec, p, n, m + 1) + norm_nm(kSpec, p, n, m)) * (1.0 + 1e-10));
      }
    }
  }
  CHECK(norm_nm(kSpec, bump(2.5, 3.5, 0.0), 2, 2) == 0.0);
}

TEST_CASE("functional bound over a grid of functions and energies") {
  int violations = 0;
  for (int i = 0; i < 10; ++i) {
    const double lo = i < 5 ? 0.05 + 0.08 * i : kSpec.b + 0.1 + 0.4 * (i - 5);
    const double hi = i < 5 ? lo + 0.4 : lo + 1.0 + 0.3 * i;
    const TestFunction f = bump(lo, hi, 1.0 + i);
    for (int j = 0; j < 10; ++j) {
      const double e = 0.25 + 3.0 * j;
      if (!functional_bound_check(kSpec, f, e).holds) ++violations;
    }
  }
  CHECK(violations == 0);

  const FunctionalBound zero = functional_bound_check(kSpec, bump(3.0, 4.0, 0.0), 1.0);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  CHECK(zero.holds);

  const FunctionalBound one = functional_bound_check(kSpec, bump(3.0, 4.0), 1.0);
  const FunctionalBound ten = functional_bound_check(kSpec, bump(3.0, 4.0, 10.0), 1.0);
  CHECK(ten.lhs == doctest::Approx(10.0 * one.lhs).epsilon(1e-12));
  CHECK(ten.rhs == doctest::Approx(10.0 * one.rhs).epsilon(1e-12));
}

TEST_CASE("momentum representation") {
  const TestFunction f = combine(1.0, bump(0.1, 0.9), 0.5, bump(2.3, 5.8));
  const EnergyGrid& g = basis().grid();
  const auto fk = momentum_forward(kSpec, f, g.k, kKMax);
  const auto fe = forward_continuum(basis(), f);
  double k_side = 0.0;
  for (std::size_t j = 0; j < g.k.size(); ++j) {
    k_side += g.k_weight[j] * std::norm(fk[j]);
    CHECK(std::abs(std::norm(fk[j]) - std::norm(fe[j]) * 2.0 * g.k[j] / kSpec.c) <
          1e-10 * (1.0 + std::norm(fk[j])));
  }
  const Comparison p = parseval(basis(), states(), f, f);
  const auto cb = forward_bound(kSpec, states(), f, kKMax);
  const double fc2 = p.lhs.real() - std::norm(cb[0]);
  CHECK(std::abs(k_side - fc2) < 1e-6 * p.lhs.real());

  const PotentialSpec free = testing_support::free_spec();
  const TestFunction b = bump(0.5, 2.5);
  for (double k : {0.5, 2.0, 7.0}) {
    const double want = std::sqrt(2.0 / std::numbers::pi) *
                        gk_integral([&](double r) { return b(r).real() * std::sin(k * r); },
                                    0.5, 2.5, 32);
    const auto got = momentum_forward(free, b, {k});
    CHECK(std::abs(std::abs(got[0]) - std::abs(want)) < 1e-10);
  }
  for (const Complex v : momentum_forward(kSpec, bump(3.0, 4.0, 0.0), {1.0, 2.0})) {
    CHECK(v == Complex(0.0));
  }
}

TEST_CASE("sampled input interpolates") {
  std::vector<double> r;
  std::vector<Complex> v;
  const TestFunction f = bump(2.5, 4.5);
  for (int i = 0; i <= 400; ++i) {
    r.push_back(2.4 + 0.0055 * i);
    v.push_back(f(r.back()));
  }
  const TestFunction s = sampled(r, v);
  for (double x : {2.61, 3.33, 4.07}) CHECK(std::abs(s(x) - f(x)) < 1e-8);
  CHECK(s.max_order() == 2);
  CHECK_THROWS_AS(sampled({1.0, 0.5, 2.0, 3.0}, {0.0, 0.0, 0.0, 0.0}), ValidationError);

  r[3] += 1e-3;
  CHECK(sampled(r, v).max_order() == 1);
}

TEST_CASE("decomposition serialises to JSON") {
  const DecomposedState d = decompose(basis(), states(), bump(2.5, 4.0));
  const auto j = nlohmann::json::parse(to_json(d));
  REQUIRE(j["bound"].size() == 1);
  CHECK(j["bound"][0]["n"] == 1);
  CHECK(j["continuum"]["grid"] == "k-gauss-legendre");
  CHECK(j["continuum"]["k_max"].get<double>() == kKMax);
  REQUIRE(j["continuum"]["nodes"].size() == basis().size());
  CHECK(j["continuum"]["nodes"][7]["e"].get<double>() == basis().grid().e[7]);
  CHECK(j["continuum"]["nodes"][7]["re"].get<double>() == d.continuum[7].real());
  CHECK(to_json(d) == to_json(decompose(basis(), states(), bump(2.5, 4.0))));
}
