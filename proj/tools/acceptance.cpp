// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "oracles/matching_oracle.hpp"
#include "oracles/shooter.hpp"
#include "rigged/coeffs.hpp"
#include "rigged/eigenfunctions.hpp"
#include "rigged/spectrum.hpp"
#include "rigged/transform.hpp"
#include "rigged/verify.hpp"

using namespace rigged;

namespace {

const PotentialSpec kShipped{10.0, 4.0, 1.0, 2.0, 1.0};
constexpr double kKMax = 120.0;
constexpr int kNodes = 2048;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

// measured <= tol with a readable note.
std::string bound_note(const std::string& what, double measured, double tol) {
  return what + " " + sci(measured) + " (tol " + sci(tol) + ")";
}

double rel(Complex got, Complex want) {
  return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

PotentialSpec random_spec(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PotentialSpec s;
  s.v1 = 0.5 + 25.0 * u(rng);
  s.v2 = 20.0 * u(rng);
  s.a = 0.3 + 1.5 * u(rng);
  s.b = s.a + 0.2 + 1.5 * u(rng);
  s.c = 0.5 + 1.5 * u(rng);
  return s;
}

// Normwise relative mismatch of the (alpha, beta) pairs, each pair taken at
// its region's left edge.
double family_mismatch(const PotentialSpec& s, Family f, Complex e) {
  const auto wave = PiecewiseWave::make(s, f, Energy{e});
  const auto ref =
      oracle::family({s.v1, s.v2, s.a, s.b, s.c}, std::string(to_string(f)), e);
  const double x0[] = {0.0, s.a, s.b};
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    const auto& got = wave.regions()[i];
    const double up = std::abs(std::exp(ref[i].lambda * x0[i]));
    const double down = 1.0 / up;
    const double scale = std::max(std::abs(ref[i].alpha) * up, std::abs(ref[i].beta) * down);
    const double diff = std::max(std::abs(got.alpha - ref[i].alpha) * up,
                                 std::abs(got.beta - ref[i].beta) * down);
    worst = std::max(worst, diff / scale);
  }
  return worst;
}

Outcome matching_oracle() {
  const Family families[] = {Family::chi,         Family::chi_tilde,  Family::theta_plus,
                             Family::theta_minus, Family::theta_tilde, Family::sigma1_neg,
                             Family::sigma2_pos};
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const PotentialSpec s = random_spec(rng);
    double im = 30.0 * u(rng);
    if (std::abs(im) < 0.05) im = std::copysign(0.05, im);
    const Complex e(30.0 * u(rng), im);
    for (Family f : families) worst = std::max(worst, family_mismatch(s, f, e));
  }
  return {worst <= 1e-10, bound_note("worst relative mismatch", worst, 1e-10)};
}

Outcome jost_chain() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> uk(0.01, 30.0);
  double tilde = 0.0, ratio = 0.0, unit = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const PotentialSpec s = random_spec(rng);
    const double k = uk(rng);
    const auto w = wavenumbers(s, Momentum{k});
    const auto q = j(s, w);
    const Complex sm = s_matrix(s, k);
    tilde = std::max(tilde, rel(tilde_j(s, w)[2], q[3]));
    ratio = std::max(ratio, rel(sm, -q[2] / q[3]));
    unit = std::max(unit, std::abs(std::abs(sm) - 1.0));
  }
  const double worst = std::max({tilde, ratio, unit});
  return {worst <= 1e-10, bound_note("J~3(-ik) vs J4", tilde, 1e-10) + ", " +
                              bound_note("S vs -J3/J4", ratio, 1e-10) + ", " +
                              bound_note("||S|-1|", unit, 1e-10)};
}

Outcome bound_counts() {
  bool ok = true;
  std::string detail;
  const double strengths[] = {1.0, 3.16, 10.0};
  const std::size_t expected[] = {0, 1, 3};
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double g = strengths[i];
    const PotentialSpec s{g * g, 0.0, 1.0, 2.0, 1.0};
    const auto states = find_bound_states(s);
    const auto shot = oracle::bound_energies({s.v1, s.v2, s.a, s.b, s.c});
    std::size_t rule = 0;
    while ((rule + 0.5) * std::numbers::pi < g) ++rule;
    ok = ok && states.size() == expected[i] && shot.size() == expected[i] &&
         rule == expected[i];
    for (std::size_t n = 0; n < std::min(states.size(), shot.size()); ++n) {
      worst = std::max(worst, std::abs(states[n].energy - shot[n]));
    }
    detail += (i ? " " : "counts ") + std::to_string(states.size()) + "/" +
              std::to_string(shot.size()) + "/" + std::to_string(rule);
  }
  ok = ok && worst <= 1e-8;
  return {ok, detail + " (library/shooter/rule, want 0 1 3), " +
                  bound_note("energy error", worst, 1e-8)};
}

Outcome normalization() {
  const PotentialSpec specs[] = {kShipped, {3.16 * 3.16, 0.0, 1.0, 2.0, 1.0},
                                 {100.0, 0.0, 1.0, 2.0, 1.0}};
  double worst = 0.0;
  int n_states = 0;
  for (const auto& s : specs) {
    for (const auto& st : find_bound_states(s)) {
      const double direct = integral_normalization(s, st);
      const double inv = direct * direct;
      worst = std::max(worst, std::abs(st.n_norm * st.n_norm - inv) / inv);
      ++n_states;
    }
  }
  return {n_states > 0 && worst <= 1e-6,
          std::to_string(n_states) + " states, " + bound_note("worst relative", worst, 1e-6)};
}

Outcome titchmarsh_kodaira() {
  const PotentialSpec& s = kShipped;
  const double integral = quad::integrate_adaptive(
      quad::RealFn([&](double e) { return rho(s, e); }), std::vector<double>{1.0, 2.0}, 1e-13);
  const double cont = std::abs(tk_measure(s, 1.0, 2.0).value - integral);
  const auto states = find_bound_states(s);
  const double e1 = states.at(0).energy;
  const double hi = states.size() > 1 ? 0.5 * (e1 + states[1].energy) : -1e-3;
  const double window = tk_measure(s, std::max(e1 - 0.5, -s.v1 + 1e-6), std::min(e1 + 0.5, hi)).value;
  const double bound = std::abs(window - states[0].n_norm * states[0].n_norm);
  return {cont <= 1e-4 && bound <= 1e-4, bound_note("[1,2] vs int rho", cont, 1e-4) + ", " +
                                             bound_note("window vs N1^2", bound, 1e-4)};
}

Outcome green_contract() {
  const auto checks = run_verify(kShipped, "green");
  double sym = 0.0, jump = 0.0, ident = 0.0;
  bool ok = checks.size() == 9;
  for (const auto& c : checks) {
    ok = ok && c.pass;
    const double m = std::isfinite(c.measured) ? c.measured : INFINITY;
    if (c.name.find("symmetry") != std::string::npos) sym = std::max(sym, m);
    if (c.name.find("jump") != std::string::npos) jump = std::max(jump, m);
    if (c.name.find("resolvent") != std::string::npos) ident = std::max(ident, m);
  }
  return {ok, "E in {-V1-1, 3+0.5i, 3-0.5i}: " + bound_note("symmetry", sym, 1e-10) + ", " +
                  bound_note("jump", jump, 1e-8) + ", " +
                  bound_note("(E-h)R - 1", ident, 1e-6)};
}

struct Transform {
  std::vector<BoundState> states;
  std::optional<ContinuumBasis> basis;
  std::vector<TestFunction> bumps;
};

Transform& transform() {
  static Transform t = [] {
    Transform x;
    x.states = find_bound_states(kShipped);
    x.basis.emplace(kShipped, k_gauss_grid(kShipped, kNodes, kKMax));
    x.bumps = {bump(2.3, 5.8), bump(2.5, 6.5), bump(3.0, 7.0)};
    return x;
  }();
  return t;
}

Outcome completeness() {
  auto& t = transform();
  double rt = 0.0, pv = 0.0;
  for (const auto& f : t.bumps) {
    rt = std::max(rt, round_trip(*t.basis, t.states, f).relative);
    pv = std::max(pv, parseval(*t.basis, t.states, f, f).mismatch);
  }
  return {rt < 1e-6 && pv < 1e-6, "3 bumps, k_max 120: " + bound_note("round trip", rt, 1e-6) +
                                      ", " + bound_note("Parseval", pv, 1e-6)};
}

Outcome diagonalization() {
  auto& t = transform();
  const auto& grid = t.basis->grid();
  double mult = 0.0, h1 = 0.0, h2 = 0.0;
  for (const auto& f : t.bumps) {
    const auto fhat = forward_continuum(*t.basis, f);
    const auto hfhat = forward_continuum(*t.basis, apply_h(kShipped, f));
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < fhat.size(); ++k) {
      const Complex want = grid.e[k] * fhat[k];
      num += grid.weight[k] * std::norm(hfhat[k] - want);
      den += grid.weight[k] * std::norm(want);
    }
    mult = std::max(mult, std::sqrt(num / den));
    h1 = std::max(h1, matrix_element_h_power(*t.basis, t.states, f, f, 1).mismatch);
    h2 = std::max(h2, matrix_element_h_power(*t.basis, t.states, f, f, 2).mismatch);
  }
  return {mult <= 1e-6 && h1 <= 1e-5 && h2 <= 1e-4,
          bound_note("F(hf) vs E F(f)", mult, 1e-6) + ", " + bound_note("m=1", h1, 1e-5) +
              ", " + bound_note("m=2", h2, 1e-4)};
}

Outcome functional_bound() {
  std::vector<TestFunction> fs;
  for (int i = 0; i < 10; ++i) {
    const double lo = 0.1 + 0.45 * i;
    fs.push_back(bump(lo, lo + 0.8 + 0.3 * i, 1.0 + 0.5 * i));
  }
  int violations = 0;
  double worst = 0.0;
  for (const auto& f : fs) {
    for (int i = 0; i < 10; ++i) {
      const double e = 0.3 + 5.3 * i;
      const auto r = functional_bound_check(kShipped, f, e);
      if (!r.holds) ++violations;
      worst = std::max(worst, r.lhs / r.rhs);
    }
  }
  return {violations == 0,
          std::to_string(violations) + " violations of 100, worst |<f|E>|/bound " + sci(worst)};
}

std::optional<std::string> run_cli(const std::string& args, const std::string& env) {
  const std::string cmd = env + " " + RIGGED_CLI_PATH + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return std::nullopt;
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  const int status = ::pclose(pipe);
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return std::nullopt;
  return out;
}

Outcome determinism() {
  const std::string args =
      std::string("verify --suite all --config ") + RIGGED_SOURCE_DIR + "/configs/default.cfg";
  const auto one = run_cli(args, "RIGGED_THREADS=1");
  const auto eight = run_cli(args, "RIGGED_THREADS=8");
  if (!one || !eight) return {false, "verify all did not exit 0"};
  const bool same = *one == *eight;
  return {same && !one->empty(), std::to_string(one->size()) + " bytes of JSON, " +
                                     (same ? "bit-identical" : "outputs differ")};
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;  // 0 for no time limit
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "coefficient families vs matching oracle", 5.0, matching_oracle},
      {2, "Jost identity chain", 2.0, jost_chain},
      {3, "bound-state counts", 10.0, bound_counts},
      {4, "residue vs integral normalization", 10.0, normalization},
      {5, "Titchmarsh-Kodaira measure", 60.0, titchmarsh_kodaira},
      {6, "Green-function contract", 30.0, green_contract},
      {7, "completeness and Parseval", 60.0, completeness},
      {8, "diagonalization", 60.0, diagonalization},
      {9, "functional estimate", 10.0, functional_bound},
      {10, "thread-count determinism", 0.0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = sci(secs) + " s";
    if (c.limit_s > 0.0) {
      timing += " (limit " + sci(c.limit_s) + " s)";
      if (secs >= c.limit_s) {
        o.pass = false;
        timing += " too slow";
      }
    }
    if (!o.pass) ++failures;
    std::printf("%s %2d %s: %s; %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
