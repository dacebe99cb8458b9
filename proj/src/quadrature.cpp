#include "rigged/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include "rigged/errors.hpp"

namespace rigged::quad {

const Rule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<Rule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) {
    auto rule = std::make_unique<Rule>();
    // Boost returns the non-negative zeros only.
    const auto zeros = boost::math::legendre_p_zeros<double>(n);
    std::vector<std::pair<double, double>> pts;
    for (double x : zeros) {
      const double d = boost::math::legendre_p_prime(n, x);
      const double w = 2.0 / ((1.0 - x * x) * d * d);
      pts.emplace_back(x, w);
      if (x != 0.0) pts.emplace_back(-x, w);
    }
    std::sort(pts.begin(), pts.end());
    for (auto [x, w] : pts) {
      rule->nodes.push_back(x);
      rule->weights.push_back(w);
    }
    slot = std::move(rule);
  }
  return *slot;
}

Grid composite(std::span<const double> breaks, int points_per_panel,
               double max_panel) {
  const Rule& rule = gauss_legendre(points_per_panel);
  Grid g;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = breaks[i];
    const double hi = breaks[i + 1];
    if (!(hi > lo)) continue;
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_panel)));
    const double width = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = lo + (p + 0.5) * width;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        g.x.push_back(mid + 0.5 * width * rule.nodes[q]);
        g.w.push_back(0.5 * width * rule.weights[q]);
      }
    }
  }
  return g;
}

namespace {

template <typename T>
T pairwise(std::span<const T> v) {
  if (v.empty()) return T{};
  if (v.size() <= 8) {
    T s{};
    for (const T& x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise(v.first(half)) + pairwise(v.subspan(half));
}

}  // namespace

Complex pairwise_sum(std::span<const Complex> v) { return pairwise(v); }
double pairwise_sum(std::span<const double> v) { return pairwise(v); }

Complex integrate_doubling(const ComplexFn& f, std::span<const double> breaks,
                           double rel_tol, int max_doublings) {
  const Rule& rule = gauss_legendre(32);
  auto panel_sum = [&](int panels_per_interval) {
    std::vector<Complex> terms;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      const double lo = breaks[i];
      const double hi = breaks[i + 1];
      if (!(hi > lo)) continue;
      const double width = (hi - lo) / panels_per_interval;
      for (int p = 0; p < panels_per_interval; ++p) {
        const double mid = lo + (p + 0.5) * width;
        Complex s = 0.0;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
          s += rule.weights[q] * f(mid + 0.5 * width * rule.nodes[q]);
        }
        terms.push_back(0.5 * width * s);
      }
    }
    return pairwise_sum(std::span<const Complex>(terms));
  };

  int panels = 1;
  Complex prev = panel_sum(panels);
  for (int it = 0; it < max_doublings; ++it) {
    panels *= 2;
    const Complex next = panel_sum(panels);
    const double scale = std::max(std::abs(next), 1e-300);
    if (std::abs(next - prev) <= rel_tol * scale || std::abs(next - prev) < 1e-300) {
      return next;
    }
    prev = next;
  }
  throw NoConvergence("panel doubling did not converge");
}

namespace {

double magnitude(double x) { return std::abs(x); }
double magnitude(Complex x) { return std::abs(x); }

// Global adaptive scheme: always bisect the panel with the largest error
// estimate, until the summed estimate meets the tolerance or the panel
// budget is spent. Each panel uses the fixed 21-point Kronrod rule.
template <typename T, typename F>
T global_adaptive(const F& f, double lo, double hi, double rel_tol, int max_panels) {
  using boost::math::quadrature::gauss_kronrod;
  struct Panel {
    double a, b;
    T value;
    double error;
  };
  auto eval = [&](double a, double b) {
    double err = 0.0;
    const T v = gauss_kronrod<double, 21>::integrate(f, a, b, 0, 0.0, &err);
    return Panel{a, b, v, err};
  };
  auto worse = [](const Panel& x, const Panel& y) { return x.error < y.error; };
  std::vector<Panel> heap = {eval(lo, hi)};
  for (int count = 1; count < max_panels; ++count) {
    T total{};
    double error = 0.0;
    double l1 = 0.0;
    for (const Panel& p : heap) {
      total += p.value;
      error += p.error;
      l1 += magnitude(p.value);
    }
    if (error <= rel_tol * magnitude(total) || error <= 1e-15 * l1) break;
    std::pop_heap(heap.begin(), heap.end(), worse);
    const Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end(), worse);
      break;
    }
    heap.push_back(eval(worst.a, mid));
    std::push_heap(heap.begin(), heap.end(), worse);
    heap.push_back(eval(mid, worst.b));
    std::push_heap(heap.begin(), heap.end(), worse);
  }
  // Sum in interval order so the result does not depend on heap layout.
  std::sort(heap.begin(), heap.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  std::vector<T> parts;
  parts.reserve(heap.size());
  for (const Panel& p : heap) parts.push_back(p.value);
  return pairwise(std::span<const T>(parts));
}

}  // namespace

Complex integrate_adaptive(const ComplexFn& f, std::span<const double> breaks,
                           double rel_tol, int max_panels) {
  std::vector<Complex> parts;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    parts.push_back(global_adaptive<Complex>(f, breaks[i], breaks[i + 1], rel_tol, max_panels));
  }
  return pairwise_sum(std::span<const Complex>(parts));
}

double integrate_adaptive(const RealFn& f, std::span<const double> breaks,
                          double rel_tol, int max_panels) {
  std::vector<double> parts;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    parts.push_back(global_adaptive<double>(f, breaks[i], breaks[i + 1], rel_tol, max_panels));
  }
  return pairwise_sum(std::span<const double>(parts));
}

}  // namespace rigged::quad
