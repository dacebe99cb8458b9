#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "rigged/domain.hpp"

namespace testing_support {

using rigged::Complex;

inline double rel_err(Complex got, Complex want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline bool close(Complex got, Complex want, double tol) {
  return std::abs(got - want) <= tol * std::max(1.0, std::abs(want));
}

inline rigged::PotentialSpec free_spec() { return {0.0, 0.0, 1.0, 2.0, 1.0}; }

inline rigged::PotentialSpec random_spec(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  rigged::PotentialSpec s;
  s.v1 = 0.5 + 25.0 * u(rng);
  s.v2 = 20.0 * u(rng);
  s.a = 0.3 + 1.5 * u(rng);
  s.b = s.a + 0.2 + 1.5 * u(rng);
  s.c = 0.5 + 1.5 * u(rng);
  return s;
}

// Complex energy with |Im E| >= 0.05, away from every real-axis threshold.
inline Complex random_energy(std::mt19937_64& rng, double scale = 30.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double im = u(rng) * scale;
  if (std::abs(im) < 0.05) im = im < 0 ? -0.05 : 0.05;
  return {u(rng) * scale, im};
}

}  // namespace testing_support
