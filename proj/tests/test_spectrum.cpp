#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles/shooter.hpp"
#include "rigged/coeffs.hpp"
#include "rigged/eigenfunctions.hpp"
#include "rigged/errors.hpp"
#include "rigged/quadrature.hpp"
#include "rigged/spectrum.hpp"
#include "support.hpp"

using namespace rigged;
using testing_support::rel_err;

namespace {

oracle::Well well(const PotentialSpec& s) { return {s.v1, s.v2, s.a, s.b, s.c}; }

int well_rule(const PotentialSpec& s) {
  int n = 0;
  while ((n + 0.5) * std::numbers::pi < std::sqrt(s.c * s.v1) * s.a) ++n;
  return n;
}

double theta_tilde_norm_sq(const PotentialSpec& s, const BoundState& st) {
  const auto w = PiecewiseWave::make(s, Family::theta_tilde, Energy{st.energy});
  const double big_r = truncation_radius(s, st.kappa);
  const std::vector<double> breaks = {0.0, s.a, s.b, big_r};
  return quad::integrate_adaptive(
      quad::RealFn([&](double r) { return std::pow(w.eval(r).real(), 2); }), breaks, 1e-13);
}

}  // namespace

TEST_CASE("bound-state counts and energies against the shooter") {
  for (double v1 : {1.0, 10.0, 100.0}) {
    const PotentialSpec s{v1, 0.0, 1.0, 2.0, 1.0};
    CAPTURE(v1);
    const auto states = find_bound_states(s);
    const auto shot = oracle::bound_energies(well(s));
    REQUIRE(states.size() == shot.size());
    CHECK(static_cast<int>(states.size()) == well_rule(s));
    for (std::size_t i = 0; i < states.size(); ++i) {
      CHECK(states[i].n == static_cast<int>(i) + 1);
      CHECK(std::abs(states[i].energy - shot[i]) < 1e-8);
      CHECK(states[i].energy > -s.v1);
      CHECK(states[i].energy < 0.0);
      if (i > 0) CHECK(states[i].energy > states[i - 1].energy);
      CHECK(std::abs(tilde_j(s, Energy{states[i].energy})[2]) < 1e-10);
    }
  }
  CHECK(find_bound_states(PotentialSpec{1.0, 0.0, 1.0, 2.0, 1.0}).empty());
  CHECK(find_bound_states(PotentialSpec{100.0, 0.0, 1.0, 2.0, 1.0}).size() == 3);
}

TEST_CASE("bound states with a barrier match the shooter") {
  for (const PotentialSpec& s : {PotentialSpec{}, PotentialSpec{10.0, 20.0, 1.0, 2.0, 1.0},
                                 PotentialSpec{40.0, 3.0, 0.7, 1.9, 1.6}}) {
    const auto states = find_bound_states(s);
    const auto shot = oracle::bound_energies(well(s));
    REQUIRE(states.size() == shot.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
      CHECK(std::abs(states[i].energy - shot[i]) < 1e-8);
    }
  }
}

TEST_CASE("residue normalisation equals the inverse norm integral") {
  for (const PotentialSpec& s : {PotentialSpec{10.0, 0.0, 1.0, 2.0, 1.0}, PotentialSpec{},
                                 PotentialSpec{100.0, 0.0, 1.0, 2.0, 1.0}}) {
    for (const auto& st : find_bound_states(s)) {
      CHECK(st.n_norm > 0.0);
      const double inv = 1.0 / theta_tilde_norm_sq(s, st);
      CHECK(std::abs(st.n_norm * st.n_norm - inv) < 1e-6 * inv);
    }
  }
}

TEST_CASE("direct normalisation agrees with the residue of S") {
  for (const PotentialSpec& s : {PotentialSpec{10.0, 0.0, 1.0, 2.0, 1.0}, PotentialSpec{},
                                 PotentialSpec{100.0, 0.0, 1.0, 2.0, 1.0}}) {
    for (const auto& st : find_bound_states(s)) {
      const auto d = direct_normalization(s, st);
      CHECK(d.theta_plus_integral > 0.0);
      CHECK(d.contour_vs_derivative < 1e-6);
      CHECK(d.mismatch < 1e-6);
      CHECK(std::abs(d.minus_i_over_residue.imag()) < 1e-6 * d.theta_plus_integral);
    }
  }
}

TEST_CASE("spectral density") {
  const PotentialSpec fs = testing_support::free_spec();
  for (double e : {0.1, 1.0, 4.0, 17.0}) {
    CHECK(std::abs(rho(fs, e) - 1.0 / (std::numbers::pi * std::sqrt(e))) < 1e-14 / std::sqrt(e));
  }
  CHECK(std::abs(rho(fs, 4.0) - 1.0 / (2.0 * std::numbers::pi)) < 1e-15);
  const PotentialSpec s{};
  for (double e = 0.01; e < 50.0; e *= 1.3) {
    const double r = rho(s, e);
    CHECK(std::isfinite(r));
    CHECK(r > 0.0);
  }
  CHECK_THROWS_AS(rho(s, s.v2), SingularEnergy);
}

TEST_CASE("theta matrix zero patterns") {
  const PotentialSpec s{};
  const auto tm = theta_minus(s, Energy{Complex(-2.0, 0.3)});
  CHECK(tm(1, 1) == Complex(0.0));
  CHECK(tm(2, 1) == Complex(0.0));
  CHECK(tm(1, 2) != Complex(0.0));
  CHECK(tm(2, 2) != Complex(0.0));
  for (Complex e : {Complex(2.0, 0.3), Complex(2.0, -0.3)}) {
    const auto tp = theta_plus(s, Energy{e});
    CHECK(tp(1, 2) == Complex(0.0));
    CHECK(tp(2, 2) == Complex(0.0));
    CHECK(tp(1, 1) != Complex(0.0));
    CHECK(tp(2, 1) != Complex(0.0));
  }
}

TEST_CASE("Titchmarsh-Kodaira limits") {
  const PotentialSpec s{};
  const std::vector<double> breaks = {1.0, 2.0};
  const double integral = quad::integrate_adaptive(
      quad::RealFn([&](double e) { return rho(s, e); }), breaks, 1e-13);
  const auto pos = tk_measure(s, 1.0, 2.0);
  CHECK(std::abs(pos.value - integral) < 1e-4);

  const auto states = find_bound_states(s);
  REQUIRE(!states.empty());
  const double e1 = states[0].energy;
  const auto neg = tk_measure(s, e1 - 0.5, std::min(e1 + 0.5, -1e-3));
  CHECK(std::abs(neg.value - states[0].n_norm * states[0].n_norm) < 1e-4);

  const double gap_hi = states.size() > 1 ? states[1].energy : 0.0;
  const auto empty = tk_measure(s, e1 + 0.1 * (gap_hi - e1), e1 + 0.5 * (gap_hi - e1));
  CHECK(std::abs(empty.value) < 1e-6);

  CHECK_THROWS_AS(tk_measure(s, -1.0, 1.0), ValidationError);
}

TEST_CASE("Jost function") {
  const PotentialSpec fs = testing_support::free_spec();
  for (Complex k : {Complex(1.0, 0.0), Complex(0.3, 2.0), Complex(-2.0, -1.0)}) {
    CHECK(std::abs(jost(fs, k) - 1.0) < 1e-14);
  }
  for (const PotentialSpec& s : {PotentialSpec{}, PotentialSpec{100.0, 0.0, 1.0, 2.0, 1.0}}) {
    for (const auto& st : find_bound_states(s)) {
      const Complex k(0.0, st.kappa);
      const double scale = std::abs(jost(s, k + 0.1));
      CHECK(std::abs(jost(s, k)) < 1e-8 * scale);
    }
  }
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  const PotentialSpec s{};
  for (int i = 0; i < 200; ++i) {
    const Complex k(u(rng), u(rng));
    CHECK(rel_err(std::conj(jost(s, -std::conj(k))), jost(s, k)) < 1e-10);
  }
}

TEST_CASE("S matrix") {
  const PotentialSpec fs = testing_support::free_spec();
  for (double k : {0.2, 1.0, 5.0}) CHECK(std::abs(s_matrix(fs, k) - 1.0) < 1e-14);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.01, 20.0);
  for (int i = 0; i < 1000; ++i) {
    const PotentialSpec s = testing_support::random_spec(rng);
    const double k = u(rng);
    CHECK(std::abs(std::abs(s_matrix(s, k)) - 1.0) < 1e-10);
  }
  const PotentialSpec s{};
  const double k_hi = 1e3 * std::sqrt(s.c * std::max(s.v1, s.v2));
  CHECK(std::abs(s_matrix(s, k_hi) - 1.0) < 1e-2);
}

TEST_CASE("Jost zeros in the lower half plane") {
  const PotentialSpec fs = testing_support::free_spec();
  CHECK(count_jost_zeros(fs, {-5.0, 5.0, -3.0, -0.01}) == 0);
  CHECK(find_jost_zeros(fs, {-5.0, 5.0, -3.0, -0.01}).empty());

  const PotentialSpec s{10.0, 20.0, 1.0, 2.0, 1.0};
  const auto zeros = find_jost_zeros(s, {-8.0, 8.0, -2.0, -1e-5});
  REQUIRE(!zeros.empty());
  int off_axis = 0;
  for (const Complex& z : zeros) {
    CHECK(z.imag() < 0.0);
    // Fourth-quadrant zeros are resonances with Im E < 0; their mirrors in the
    // third quadrant have Im E > 0; zeros on the negative imaginary axis are
    // antibound states with real E < 0.
    const Complex e = z * z / s.c;
    if (std::abs(z.real()) > 1e-10) {
      ++off_axis;
      CHECK(e.imag() * z.real() < 0.0);
    } else {
      CHECK(e.real() < 0.0);
    }
    const double scale = std::abs(jost(s, z + Complex(0.1, 0.0)));
    CHECK(std::abs(jost(s, z)) < 1e-10 * std::max(1.0, scale));
    bool mirrored = false;
    for (const Complex& w : zeros) {
      if (std::abs(w + std::conj(z)) < 1e-8 * std::abs(z)) mirrored = true;
    }
    CHECK(mirrored);
  }
  CHECK(off_axis % 2 == 0);
  CHECK(off_axis >= 2);
  CHECK_THROWS_AS(find_jost_zeros(s, {-1.0, 1.0, -1.0, 0.5}), ValidationError);
}
