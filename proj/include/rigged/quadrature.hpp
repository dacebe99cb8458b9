#pragma once

#include <functional>
#include <span>
#include <vector>

#include "rigged/domain.hpp"

namespace rigged::quad {

/// Gauss-Legendre rule on [-1, 1], nodes ascending.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point rule (Legendre zeros from Boost.Math).
const Rule& gauss_legendre(int n);

/// Nodes and weights of a composite rule over sorted break points, with each
/// interval split into equal panels no wider than `max_panel`.
struct Grid {
  std::vector<double> x;
  std::vector<double> w;
};
Grid composite(std::span<const double> breaks, int points_per_panel,
               double max_panel);

using ComplexFn = std::function<Complex(double)>;
using RealFn = std::function<double(double)>;

/// Sum with pairwise splitting; the result does not depend on thread count.
Complex pairwise_sum(std::span<const Complex> v);
double pairwise_sum(std::span<const double> v);

/// 32-point Gauss per panel over the sorted break points; the panel count
/// doubles until the relative change drops below `rel_tol`.
/// Throws NoConvergence after `max_doublings`.
Complex integrate_doubling(const ComplexFn& f, std::span<const double> breaks,
                           double rel_tol = 1e-10, int max_doublings = 10);

/// Globally adaptive Gauss-Kronrod (21 point) on each interval between break
/// points: the worst panel is bisected until the summed error estimate is
/// below rel_tol relative, or `max_panels` panels exist.
Complex integrate_adaptive(const ComplexFn& f, std::span<const double> breaks,
                           double rel_tol = 1e-12, int max_panels = 2000);
double integrate_adaptive(const RealFn& f, std::span<const double> breaks,
                          double rel_tol = 1e-12, int max_panels = 2000);

}  // namespace rigged::quad
