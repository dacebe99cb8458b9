#include "rigged/rigged.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "rigged/eigenfunctions.hpp"
#include "rigged/errors.hpp"
#include "rigged/green.hpp"
#include "rigged/spectrum.hpp"
#include "rigged/transform.hpp"
#include "rigged/verify.hpp"

struct rigged_potential {
  rigged::PotentialSpec spec;
  std::mutex mutex;
  std::optional<std::vector<rigged::BoundState>> states;
};

namespace {

thread_local std::string last_error;

rigged_status fail(rigged_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <typename F>
rigged_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return RIGGED_OK;
  } catch (const rigged::ValidationError& e) {
    return fail(RIGGED_INVALID_ARGUMENT, e.what());
  } catch (const rigged::SingularEnergy& e) {
    return fail(RIGGED_SINGULAR_ENERGY, e.what());
  } catch (const rigged::SpectrumHit& e) {
    return fail(RIGGED_SPECTRUM_HIT, e.what());
  } catch (const rigged::JostZero& e) {
    return fail(RIGGED_SPECTRUM_HIT, e.what());
  } catch (const rigged::Error& e) {
    return fail(RIGGED_NO_CONVERGENCE, e.what());
  } catch (const std::exception& e) {
    return fail(RIGGED_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(RIGGED_INTERNAL_ERROR, "unknown failure");
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* what) {
  if (!ok) throw rigged::ValidationError(what);
}

const std::vector<rigged::BoundState>& states_of(rigged_potential* p) {
  std::lock_guard lock(p->mutex);
  if (!p->states) p->states = rigged::find_bound_states(p->spec);
  return *p->states;
}

}  // namespace

extern "C" {

const char* rigged_last_error(void) { return last_error.c_str(); }

const char* rigged_status_name(rigged_status status) {
  switch (status) {
    case RIGGED_OK: return "ok";
    case RIGGED_INVALID_ARGUMENT: return "invalid argument";
    case RIGGED_SINGULAR_ENERGY: return "singular energy";
    case RIGGED_SPECTRUM_HIT: return "spectrum hit";
    case RIGGED_NO_CONVERGENCE: return "no convergence";
    case RIGGED_INTERNAL_ERROR: return "internal error";
  }
  return "unknown status";
}

void rigged_string_free(char* s) { std::free(s); }

rigged_status rigged_potential_create(double v1, double v2, double a, double b, double c,
                                      rigged_potential** out) {
  return guarded([&] {
    require(out != nullptr, "output handle pointer is null");
    *out = nullptr;
    const rigged::PotentialSpec spec{v1, v2, a, b, c};
    if (auto problem = rigged::validate(spec)) throw rigged::ValidationError(*problem);
    auto* p = new rigged_potential;
    p->spec = spec;
    *out = p;
  });
}

void rigged_potential_destroy(rigged_potential* p) { delete p; }

rigged_status rigged_bound_states(rigged_potential* p, rigged_bound_state* out,
                                  size_t capacity, size_t* count) {
  return guarded([&] {
    require(p != nullptr && count != nullptr, "null argument");
    require(out != nullptr || capacity == 0, "null output buffer");
    const auto& states = states_of(p);
    *count = states.size();
    for (size_t i = 0; i < states.size() && i < capacity; ++i) {
      const auto& st = states[i];
      const double integral = rigged::integral_normalization(p->spec, st);
      const double n2 = integral * integral;
      out[i] = {st.n,     st.energy, st.kappa,
                st.n_norm, integral, std::abs(st.n_norm * st.n_norm - n2) / n2};
    }
  });
}

rigged_status rigged_default_k_max(const rigged_potential* p, double* out) {
  return guarded([&] {
    require(p != nullptr && out != nullptr, "null argument");
    *out = rigged::default_k_max(p->spec);
  });
}

rigged_status rigged_rho(const rigged_potential* p, double e, double* out) {
  return guarded([&] {
    require(p != nullptr && out != nullptr, "null argument");
    *out = rigged::rho(p->spec, e);
  });
}

rigged_status rigged_s_matrix(const rigged_potential* p, double k, double* re, double* im) {
  return guarded([&] {
    require(p != nullptr && re != nullptr && im != nullptr, "null argument");
    const rigged::Complex s = rigged::s_matrix(p->spec, k);
    *re = s.real();
    *im = s.imag();
  });
}

rigged_status rigged_jost(const rigged_potential* p, double k_re, double k_im, double* re,
                          double* im) {
  return guarded([&] {
    require(p != nullptr && re != nullptr && im != nullptr, "null argument");
    const rigged::Complex j = rigged::jost(p->spec, {k_re, k_im});
    *re = j.real();
    *im = j.imag();
  });
}

rigged_status rigged_green(const rigged_potential* p, double e_re, double e_im, double r,
                           double s, double* re, double* im) {
  return guarded([&] {
    require(p != nullptr && re != nullptr && im != nullptr, "null argument");
    const rigged::Complex g = rigged::green_e(p->spec, rigged::Energy{{e_re, e_im}}, r, s);
    *re = g.real();
    *im = g.imag();
  });
}

rigged_status rigged_sample_wave(rigged_potential* p, const char* family, double x_re,
                                 double x_im, const double* r, size_t n, double* out_re,
                                 double* out_im) {
  return guarded([&] {
    require(p != nullptr && family != nullptr, "null argument");
    require(n == 0 || (r != nullptr && out_re != nullptr && out_im != nullptr),
            "null sample buffer");
    const std::string name(family);
    auto emit = [&](auto&& value) {
      for (size_t i = 0; i < n; ++i) {
        const rigged::Complex v = value(r[i]);
        out_re[i] = v.real();
        out_im[i] = v.imag();
      }
    };
    if (name == "phi_delta") {
      const rigged::ContinuumEigenfunction phi(p->spec, x_re);
      emit([&](double x) { return rigged::Complex(phi(x)); });
    } else if (name == "momentum_ket") {
      require(x_re > 0.0, "momentum_ket needs k > 0");
      const auto chi =
          rigged::PiecewiseWave::make(p->spec, rigged::Family::chi, rigged::Momentum{x_re});
      const rigged::Complex pre =
          1.0 / rigged::branch_sqrt(2.0 * std::numbers::pi * chi.quad()[2] * chi.quad()[3]);
      emit([&](double x) { return rigged::Complex((pre * chi.eval(x)).real()); });
    } else if (name.rfind("bound:", 0) == 0) {
      int index = 0;
      try {
        index = std::stoi(name.substr(6));
      } catch (const std::exception&) {
        throw rigged::ValidationError("bad bound-state index in '" + name + "'");
      }
      const auto& states = states_of(p);
      if (index < 1 || index > static_cast<int>(states.size())) {
        throw rigged::ValidationError("no bound state " + name.substr(6) + " (there are " +
                                      std::to_string(states.size()) + ")");
      }
      const rigged::BoundStateFunction phi(p->spec, states[index - 1]);
      emit([&](double x) { return rigged::Complex(phi(x)); });
    } else {
      const auto fam = rigged::family_from_string(name);
      if (!fam) throw rigged::ValidationError("unknown family '" + name + "'");
      const auto w = rigged::PiecewiseWave::make(p->spec, *fam, rigged::Energy{{x_re, x_im}});
      emit([&](double x) { return w.eval(x); });
    }
  });
}

rigged_status rigged_verify(const rigged_potential* p, const char* suite,
                            const rigged_verify_options* opts, char** json, int* all_pass) {
  return guarded([&] {
    require(p != nullptr && suite != nullptr && json != nullptr && all_pass != nullptr,
            "null argument");
    *json = nullptr;
    rigged::VerifyOptions o;
    if (opts != nullptr) {
      if (opts->tol_match > 0.0) o.tol_match = opts->tol_match;
      if (opts->tol_quad > 0.0) o.tol_quad = opts->tol_quad;
      if (opts->tol_root > 0.0) o.tol_root = opts->tol_root;
      if (opts->k_max > 0.0) o.k_max = opts->k_max;
      if (opts->nodes > 0) o.nodes = opts->nodes;
    }
    const auto checks = rigged::run_verify(p->spec, suite, o);
    *all_pass = 1;
    for (const auto& c : checks) {
      if (!c.pass) *all_pass = 0;
    }
    *json = copy_string(rigged::verify_json(checks));
  });
}

rigged_status rigged_expand(rigged_potential* p, const double* r, const double* re,
                            const double* im, size_t n, double k_max, int nodes,
                            rigged_expansion* out) {
  return guarded([&] {
    require(p != nullptr && out != nullptr, "null argument");
    require(r != nullptr && re != nullptr && im != nullptr, "null sample buffer");
    *out = {nullptr, 0.0, 0.0, 0, nullptr};
    std::vector<double> radii(r, r + n);
    std::vector<rigged::Complex> values(n);
    for (size_t i = 0; i < n; ++i) values[i] = {re[i], im[i]};
    require(radii.empty() || radii.front() >= 0.0, "samples must lie in r >= 0");
    const rigged::TestFunction f = rigged::sampled(std::move(radii), std::move(values));

    const auto& states = states_of(p);
    const rigged::ContinuumBasis basis(p->spec,
                                       rigged::k_gauss_grid(p->spec, nodes, k_max));
    const auto d = rigged::decompose(basis, states, f);
    const auto rt = rigged::round_trip(basis, states, f);

    const int order = f.max_order();
    const auto report = rigged::phi_membership(p->spec, f, order, order / 2);
    std::string warning;
    for (const auto& c : report.checks) {
      if (c.pass) continue;
      if (!warning.empty()) warning += "; ";
      warning += c.condition;
    }
    out->json = copy_string(rigged::to_json(d));
    out->round_trip_error = rt.error;
    out->norm = rt.norm;
    out->phi_c_warning = warning.empty() ? 0 : 1;
    out->warning = warning.empty() ? nullptr : copy_string(warning);
  });
}

void rigged_expansion_free(rigged_expansion* e) {
  if (e == nullptr) return;
  std::free(e->json);
  std::free(e->warning);
  e->json = nullptr;
  e->warning = nullptr;
}

}  // extern "C"
