#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "rigged/rigged.h"

namespace {

struct Handle {
  rigged_potential* p = nullptr;
  Handle(double v1, double v2, double a, double b, double c) {
    REQUIRE(rigged_potential_create(v1, v2, a, b, c, &p) == RIGGED_OK);
  }
  ~Handle() { rigged_potential_destroy(p); }
};

}  // namespace

TEST_CASE("create validates and reports through last_error") {
  rigged_potential* p = reinterpret_cast<rigged_potential*>(0x1);
  CHECK(rigged_potential_create(10.0, 4.0, 2.0, 1.0, 1.0, &p) == RIGGED_INVALID_ARGUMENT);
  CHECK(p == nullptr);
  CHECK(std::strlen(rigged_last_error()) > 0);
  CHECK(rigged_potential_create(10.0, 4.0, 1.0, 2.0, -1.0, &p) == RIGGED_INVALID_ARGUMENT);
  CHECK(rigged_potential_create(0.0, 0.0, 1.0, 2.0, 1.0, &p) == RIGGED_INVALID_ARGUMENT);
  CHECK(std::string(rigged_last_error()) == "v1 > 0");
  CHECK(rigged_potential_create(10.0, 4.0, 1.0, 2.0, 1.0, nullptr) == RIGGED_INVALID_ARGUMENT);
  rigged_potential_destroy(nullptr);
  CHECK(std::string(rigged_status_name(RIGGED_SPECTRUM_HIT)) == "spectrum hit");
}

TEST_CASE("bound states with caller buffers") {
  Handle h(100.0, 0.0, 1.0, 2.0, 1.0);
  size_t count = 0;
  REQUIRE(rigged_bound_states(h.p, nullptr, 0, &count) == RIGGED_OK);
  CHECK(count == 3);
  std::vector<rigged_bound_state> two(2);
  REQUIRE(rigged_bound_states(h.p, two.data(), two.size(), &count) == RIGGED_OK);
  CHECK(count == 3);
  CHECK(two[0].n == 1);
  CHECK(two[1].n == 2);
  CHECK(two[0].energy < two[1].energy);
  CHECK(two[0].mismatch < 1e-6);
  CHECK(std::abs(two[0].kappa - std::sqrt(-two[0].energy)) < 1e-12);
  CHECK(rigged_bound_states(h.p, nullptr, 2, &count) == RIGGED_INVALID_ARGUMENT);
}

TEST_CASE("scalar quantities") {
  Handle h(10.0, 4.0, 1.0, 2.0, 1.0);
  double re = 0.0, im = 0.0;
  REQUIRE(rigged_s_matrix(h.p, 1.7, &re, &im) == RIGGED_OK);
  CHECK(std::abs(std::hypot(re, im) - 1.0) < 1e-12);
  double rho = 0.0;
  REQUIRE(rigged_rho(h.p, 2.0, &rho) == RIGGED_OK);
  CHECK(rho > 0.0);
  CHECK(rigged_rho(h.p, 4.0, &rho) == RIGGED_SINGULAR_ENERGY);
  REQUIRE(rigged_jost(h.p, 1.0, -0.5, &re, &im) == RIGGED_OK);
  CHECK(std::isfinite(re));
  double k_max = 0.0;
  REQUIRE(rigged_default_k_max(h.p, &k_max) == RIGGED_OK);
  CHECK(std::abs(k_max - 6.0 * std::sqrt(14.0)) < 1e-12);

  double g1r, g1i, g2r, g2i;
  REQUIRE(rigged_green(h.p, 3.0, 0.5, 0.4, 2.6, &g1r, &g1i) == RIGGED_OK);
  REQUIRE(rigged_green(h.p, 3.0, 0.5, 2.6, 0.4, &g2r, &g2i) == RIGGED_OK);
  CHECK(std::abs(g1r - g2r) < 1e-14);
  CHECK(std::abs(g1i - g2i) < 1e-14);
  CHECK(rigged_green(h.p, 3.0, 0.0, 0.4, 2.6, &g1r, &g1i) == RIGGED_SPECTRUM_HIT);
}

TEST_CASE("wave sampling") {
  // v1 must be positive; 1e-300 is free to double precision.
  Handle h(1e-300, 0.0, 1.0, 2.0, 1.0);
  const std::vector<double> r = {0.0, 0.5, 1.5, 3.0};
  std::vector<double> re(r.size()), im(r.size());
  REQUIRE(rigged_sample_wave(h.p, "chi", 4.0, 0.0, r.data(), r.size(), re.data(), im.data()) ==
          RIGGED_OK);
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(std::abs(re[i] - std::sin(2.0 * r[i])) < 1e-14);
  CHECK(rigged_sample_wave(h.p, "bound:1", 0.0, 0.0, r.data(), r.size(), re.data(), im.data()) ==
        RIGGED_INVALID_ARGUMENT);
  CHECK(rigged_sample_wave(h.p, "whatever", 1.0, 0.0, r.data(), r.size(), re.data(),
                           im.data()) == RIGGED_INVALID_ARGUMENT);
  REQUIRE(rigged_sample_wave(h.p, "momentum_ket", 2.0, 0.0, r.data(), r.size(), re.data(),
                             im.data()) == RIGGED_OK);
  // Free momentum ket: sqrt(2/pi) sin(kr) up to sign.
  CHECK(std::abs(std::abs(re[1]) - std::sqrt(2.0 / M_PI) * std::abs(std::sin(1.0))) < 1e-12);

  Handle well(10.0, 4.0, 1.0, 2.0, 1.0);
  REQUIRE(rigged_sample_wave(well.p, "bound:1", 0.0, 0.0, r.data(), r.size(), re.data(),
                             im.data()) == RIGGED_OK);
  CHECK(re[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rigged_sample_wave(well.p, "theta_plus", 4.0, 0.0, r.data(), r.size(), re.data(),
                           im.data()) == RIGGED_SINGULAR_ENERGY);
}

TEST_CASE("verify and expand through the C surface") {
  Handle h(10.0, 4.0, 1.0, 2.0, 1.0);
  char* json = nullptr;
  int pass = 0;
  REQUIRE(rigged_verify(h.p, "smatrix", nullptr, &json, &pass) == RIGGED_OK);
  CHECK(pass == 1);
  CHECK(nlohmann::json::parse(json).size() == 3);
  rigged_string_free(json);
  CHECK(rigged_verify(h.p, "nope", nullptr, &json, &pass) == RIGGED_INVALID_ARGUMENT);

  rigged_verify_options tight{1e-17, 0.0, 0.0, 0.0, 0};
  REQUIRE(rigged_verify(h.p, "smatrix", &tight, &json, &pass) == RIGGED_OK);
  CHECK(pass == 0);
  rigged_string_free(json);

  std::vector<double> r, re, im;
  for (int i = 0; i <= 400; ++i) {
    const double x = 2.0 + 0.0125 * i;
    const double t = 0.5 * (x - 4.5), u = 1.0 - t * t;
    r.push_back(x);
    re.push_back(u > 1e-3 ? std::exp(-1.0 / u) : 0.0);
    im.push_back(0.0);
  }
  rigged_expansion ex{};
  REQUIRE(rigged_expand(h.p, r.data(), re.data(), im.data(), r.size(), 120.0, 2048, &ex) ==
          RIGGED_OK);
  CHECK(ex.round_trip_error / ex.norm < 1e-6);
  CHECK(ex.phi_c_warning == 0);
  CHECK(ex.warning == nullptr);
  const auto doc = nlohmann::json::parse(ex.json);
  CHECK(doc["continuum"]["k_max"].get<double>() == 120.0);
  rigged_expansion_free(&ex);
  CHECK(ex.json == nullptr);

  const double bad_r[] = {1.0, 0.5, 2.0, 3.0};
  const double zeros[] = {0.0, 0.0, 0.0, 0.0};
  CHECK(rigged_expand(h.p, bad_r, zeros, zeros, 4, 0.0, 64, &ex) == RIGGED_INVALID_ARGUMENT);
}
