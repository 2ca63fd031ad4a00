#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "qlmass/qlmass.h"

namespace {

nlohmann::json take(char* s) {
  REQUIRE(s != nullptr);
  auto j = nlohmann::json::parse(s);
  qlm_string_free(s);
  return j;
}

}  // namespace

TEST_CASE("metric handles and embedding totals") {
  qlm_metric* m = nullptr;
  REQUIRE(qlm_metric_round(1.0, 1024, &m) == QLM_OK);
  CHECK(qlm_metric_size(m) == 1024);
  double total = 0.0;
  CHECK(qlm_embed_euclidean_total(m, &total) == QLM_OK);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-8));

  qlm_bound_options o;
  qlm_bound_options_default(&o);
  o.kappa = 1.0;
  o.p_mode = QLM_P_CENTER;
  double upper = 0.0;
  char* json = nullptr;
  CHECK(qlm_lambda_upper(m, &o, &upper, &json) == QLM_OK);
  CHECK(upper == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  CHECK(take(json)["best"]["p"] == "center");
  qlm_metric_free(m);
}

TEST_CASE("error codes and messages") {
  std::vector<double> s, f;
  for (int i = 0; i < 64; ++i) {
    s.push_back(std::numbers::pi * i / 63.0);
    f.push_back(2.0 * std::sin(s.back()));
  }
  qlm_metric* m = nullptr;
  CHECK(qlm_metric_from_samples(s.data(), f.data(), s.size(), 1e-6, &m) == QLM_E_POLE_CLOSURE);
  CHECK(m == nullptr);
  CHECK(std::string(qlm_last_error()).find("PoleClosureViolation") == 0);
  CHECK(std::string(qlm_error_name(QLM_E_POLE_CLOSURE)) == "PoleClosureViolation");
  CHECK(qlm_metric_round(1.0, 64, nullptr) == QLM_E_INVALID_ARGUMENT);
  CHECK(qlm_metric_load_csv("/nonexistent.csv", 1e-6, &m) == QLM_E_IO);
  qlm_radial* d = nullptr;
  CHECK(qlm_preset("nosuch", 0, nullptr, &d, nullptr) == QLM_E_INVALID_ARGUMENT);
  CHECK(qlm_preset("schwarzschild:1,1.5", 0, nullptr, &d, nullptr) == QLM_E_INVALID_RADII);
}

TEST_CASE("presets and mass brackets") {
  qlm_metric* boundary = nullptr;
  qlm_radial* band = nullptr;
  int convex = 0;
  REQUIRE(qlm_preset("schwarzschild:1,3", 1024, &boundary, &band, &convex) == QLM_OK);
  CHECK(convex == 1);
  CHECK(qlm_radial_role(band) == QLM_ROLE_HORIZON);
  double by = 0.0;
  CHECK(qlm_brown_york(band, 1024, &by) == QLM_OK);
  CHECK(by == doctest::Approx(3.0 - std::sqrt(3.0)).epsilon(1e-8));

  char* json = nullptr;
  REQUIRE(qlm_mass_bracket(band, nullptr, &json) == QLM_OK);
  const auto j = take(json);
  CHECK(j["mass_lower"].get<double>() >= 3.0 - std::sqrt(3.0) - 1e-8);
  CHECK(j["lambda_lower"].get<double>() <= j["lambda_upper"].get<double>());
  CHECK(j["brown_york_mass"].get<double>() == doctest::Approx(by));

  qlm_radial* ball = nullptr;
  REQUIRE(qlm_preset("round", 512, nullptr, &ball, nullptr) == QLM_OK);
  const qlm_radial* parts[] = {band, ball};
  REQUIRE(qlm_mass_bracket_combined(parts, 2, nullptr, &json) == QLM_OK);
  const auto c = take(json);
  CHECK(c["lambda_lower"].get<double>() == doctest::Approx(4.0).epsilon(1e-8));
  CHECK(c["components"].size() == 2);

  REQUIRE(qlm_doubling(band, 0.1, &json) == QLM_OK);
  const auto dbl = take(json);
  CHECK(dbl["outer_margin"].get<double>() > 0.0);
  CHECK(qlm_doubling(ball, 0.1, &json) == QLM_E_NOT_MINIMAL);

  qlm_radial* capped = nullptr;
  REQUIRE(qlm_cap_fill(band, 0.25, &capped, &json) == QLM_OK);
  CHECK(take(json)["eta"].get<double>() < 0.05);
  REQUIRE(qlm_shitam_check(capped, &json) == QLM_OK);
  CHECK(take(json)["gap"].get<double>() > 0.0);
  REQUIRE(qlm_validate_fillin(capped, boundary, &json) == QLM_OK);
  CHECK(take(json)["in_F"] == true);

  qlm_radial_free(capped);
  qlm_radial_free(ball);
  qlm_radial_free(band);
  qlm_metric_free(boundary);

  qlm_metric* neck = nullptr;
  qlm_radial* none = reinterpret_cast<qlm_radial*>(&convex);
  REQUIRE(qlm_preset("dumbbell", 512, &neck, &none, &convex) == QLM_OK);
  CHECK(none == nullptr);
  CHECK(convex == 0);
  REQUIRE(qlm_lambda_bracket(neck, nullptr, &json) == QLM_OK);
  const auto nb = take(json);
  CHECK(nb["lower"].is_null());
  CHECK(nb["lower_is_empty"] == true);
  CHECK(nb["upper"].is_number());
  qlm_metric_free(neck);
}

TEST_CASE("conformal constructions") {
  qlm_radial* cap = nullptr;
  REQUIRE(qlm_preset("cap:1", 1025, nullptr, &cap, nullptr) == QLM_OK);
  char* json = nullptr;
  REQUIRE(qlm_scalar_flat(cap, &json) == QLM_OK);
  CHECK(take(json)["total_H_new"].get<double>() == doctest::Approx(8.0 * std::numbers::pi * std::sin(1.0)).epsilon(1e-5));
  REQUIRE(qlm_weak_meanconvex_fix(cap, 0.1, &json) == QLM_OK);
  const auto w = take(json);
  CHECK(w["min_H_new"].get<double>() > w["min_H_old"].get<double>());
  REQUIRE(qlm_positivity_perturbation(cap, 0.1, &json) == QLM_OK);
  CHECK(take(json)["report"]["flags"]["boundary_metric_preserved"] == true);
  qlm_radial_free(cap);

  qlm_tet* ball = nullptr;
  REQUIRE(qlm_tet_ball(1.0, 4, 3, &ball) == QLM_OK);
  CHECK(qlm_tet_vertex_count(ball) > 100);
  REQUIRE(qlm_scalar_flat_tet(ball, &json) == QLM_OK);
  CHECK(take(json)["min_u"].get<double>() == doctest::Approx(1.0).epsilon(1e-8));
  qlm_tet_free(ball);
}

TEST_CASE("random fill-ins and the property suite") {
  qlm_radial* a = nullptr;
  REQUIRE(qlm_radial_random_fillin(7, 0, &a) == QLM_OK);
  char* json = nullptr;
  REQUIRE(qlm_shitam_check(a, &json) == QLM_OK);
  CHECK(take(json)["gap"].get<double>() >= -1e-9);
  qlm_radial_free(a);

  qlm_check_options o;
  qlm_check_options_default(&o);
  o.seeds = 50;
  o.resolution = 32;
  int all = 0;
  REQUIRE(qlm_check(&o, &all, &json) == QLM_OK);
  const auto j = take(json);
  CHECK(all == 1);
  CHECK(j["properties"].size() >= 5);
  o.resolution = 4;
  CHECK(qlm_check(&o, &all, &json) == QLM_E_INVALID_ARGUMENT);
}
