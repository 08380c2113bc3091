#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <string>

#include "obslearn/obslearn.h"

#include "core/belief.hpp"
#include "core/config.hpp"
#include "core/expectation.hpp"
#include "core/serialize.hpp"
#include "support/oracles.hpp"

using namespace obslearn;

namespace {

struct model_guard {
  obslearn_model* h = nullptr;
  ~model_guard() { obslearn_model_destroy(h); }
};

struct config_guard {
  obslearn_config* h = nullptr;
  ~config_guard() { obslearn_config_destroy(h); }
};

struct trace_guard {
  obslearn_trace* h = nullptr;
  ~trace_guard() { obslearn_trace_destroy(h); }
};

}  // namespace

TEST_CASE("version and error channel") {
  CHECK(std::string(obslearn_version()) == "0.1.0");

  model_guard bad;
  CHECK(obslearn_model_create(-1.0, 1.0, 1.0, &bad.h) == OBSLEARN_ERR_INVALID_ARGUMENT);
  CHECK(bad.h == nullptr);
  CHECK(std::string(obslearn_last_error()).size() > 0);

  // The next successful call clears the thread's error message.
  model_guard ok;
  CHECK(obslearn_model_create(1.0, 1.0, 1.0, &ok.h) == OBSLEARN_OK);
  REQUIRE(ok.h != nullptr);
  CHECK(std::string(obslearn_last_error()).empty());
}

TEST_CASE("null pointers are rejected without touching state") {
  CHECK(obslearn_model_create(1.0, 1.0, 1.0, nullptr) == OBSLEARN_ERR_INVALID_ARGUMENT);
  CHECK(obslearn_posterior_mean(nullptr, 0.0, 0.0, nullptr) == OBSLEARN_ERR_INVALID_ARGUMENT);
  CHECK(obslearn_run_check(nullptr, nullptr) == OBSLEARN_ERR_INVALID_ARGUMENT);
  CHECK(obslearn_config_hash(nullptr, nullptr, 0) == OBSLEARN_ERR_INVALID_ARGUMENT);
  CHECK(obslearn_evolve_myopic(nullptr, 0.0, 0.0, 1, nullptr) == OBSLEARN_ERR_INVALID_ARGUMENT);
  // Destroy must accept null.
  obslearn_model_destroy(nullptr);
  obslearn_trace_destroy(nullptr);
  obslearn_config_destroy(nullptr);
}

TEST_CASE("model services match the library bit for bit") {
  model_guard g;
  REQUIRE(obslearn_model_create(1.0, 1.0, 2.0, &g.h) == OBSLEARN_OK);

  const gaussian_model model(1.0, 1.0, 2.0);
  const expectation_engine eng(model, engine_settings{});

  double got = 0.0;
  REQUIRE(obslearn_posterior_mean(g.h, 0.7, -0.2, &got) == OBSLEARN_OK);
  CHECK(got == model.posterior_mean(0.7, -0.2));

  REQUIRE(obslearn_marginal_expectation(g.h, 0, 0.7, &got) == OBSLEARN_OK);
  CHECK(got == eng.marginal_expectation(player::a, 0.7));
  REQUIRE(obslearn_marginal_expectation(g.h, 1, -1.3, &got) == OBSLEARN_OK);
  CHECK(got == eng.marginal_expectation(player::b, -1.3));

  REQUIRE(obslearn_truncated_expectation(g.h, 0, 0.4, 0.3, 1.7, &got) == OBSLEARN_OK);
  CHECK(got == eng.truncated_expectation(player::a, 0.4, belief_interval::bounded(0.3, 1.7)));

  // Unbounded endpoints spell infinity directly.
  REQUIRE(obslearn_truncated_expectation(g.h, 0, 0.4, 0.0, INFINITY, &got) == OBSLEARN_OK);
  CHECK(got == eng.truncated_expectation(player::a, 0.4, belief_interval::at_least(0.0)));
  REQUIRE(obslearn_truncated_expectation(g.h, 1, 0.0, -INFINITY, INFINITY, &got) == OBSLEARN_OK);
  CHECK(got == eng.truncated_expectation(player::b, 0.0, belief_interval::all()));

  REQUIRE(obslearn_type_probability(g.h, 0, 0.4, 0.3, 1.7, &got) == OBSLEARN_OK);
  CHECK(got == eng.type_probability(player::a, 0.4, belief_interval::bounded(0.3, 1.7)));

  REQUIRE(obslearn_conditional_type_density(g.h, 0, 0.4, 0.9, 0.3, 1.7, &got) == OBSLEARN_OK);
  CHECK(got == eng.conditional_type_density(player::a, 0.4, 0.9, belief_interval::bounded(0.3, 1.7)));

  REQUIRE(obslearn_myopic_threshold(g.h, 0, 0.0, INFINITY, &got) == OBSLEARN_OK);
  CHECK(got == eng.myopic_threshold(player::a, belief_interval::at_least(0.0)));
  REQUIRE(obslearn_myopic_threshold(g.h, 0, -INFINITY, INFINITY, &got) == OBSLEARN_OK);
  CHECK(got == 0.0);

  int action = 99;
  REQUIRE(obslearn_dominant_action(g.h, 0, -5.0, -INFINITY, 0.0, &action) == OBSLEARN_OK);
  CHECK(action == -1);
  REQUIRE(obslearn_dominant_action(g.h, 0, 0.0, -INFINITY, INFINITY, &action) == OBSLEARN_OK);
  CHECK(action == 0);

  // Argument screens.
  CHECK(obslearn_marginal_expectation(g.h, 2, 0.0, &got) == OBSLEARN_ERR_INVALID_ARGUMENT);
  CHECK(obslearn_truncated_expectation(g.h, 0, 0.0, 1.0, -1.0, &got) == OBSLEARN_ERR_INVALID_ARGUMENT);
  CHECK(obslearn_truncated_expectation(g.h, 0, 0.0, NAN, 1.0, &got) == OBSLEARN_ERR_INVALID_ARGUMENT);
  // Far-tail windows carry no usable mass.
  CHECK(obslearn_truncated_expectation(g.h, 0, 0.0, 60.0, 61.0, &got) ==
        OBSLEARN_ERR_DEGENERATE_SUPPORT);
}

TEST_CASE("myopic traces cross the boundary intact") {
  model_guard g;
  REQUIRE(obslearn_model_create(1.0, 1.0, 1.0, &g.h) == OBSLEARN_OK);

  const gaussian_model model(1.0, 1.0, 1.0);
  const expectation_engine eng(model, engine_settings{});
  const myopic_trace ref = evolve_myopic(eng, -0.1, 2.0, 8);

  trace_guard t;
  REQUIRE(obslearn_evolve_myopic(g.h, -0.1, 2.0, 8, &t.h) == OBSLEARN_OK);
  REQUIRE(t.h != nullptr);
  REQUIRE(obslearn_trace_length(t.h) == 8);
  CHECK(obslearn_trace_first_agreement(t.h) == ref.first_agreement);

  for (int i = 0; i < 8; ++i) {
    CAPTURE(i);
    obslearn_trace_row row{};
    REQUIRE(obslearn_trace_row_at(t.h, i, &row) == OBSLEARN_OK);
    const myopic_row& r = ref.rows[static_cast<size_t>(i)];
    CHECK(row.date == r.date);
    CHECK(row.z_a == r.z_a);
    CHECK(row.z_b == r.z_b);
    CHECK(row.s_a_lo == r.s_a.lo);
    CHECK(row.s_a_hi == r.s_a.hi);
    CHECK(row.s_b_lo == r.s_b.lo);
    CHECK(row.s_b_hi == r.s_b.hi);
    CHECK(row.m_a == r.m_a);
    CHECK(row.m_b == r.m_b);
    CHECK(row.agreed == (r.agreed ? 1 : 0));
  }

  obslearn_trace_row row{};
  CHECK(obslearn_trace_row_at(t.h, -1, &row) == OBSLEARN_ERR_INVALID_ARGUMENT);
  CHECK(obslearn_trace_row_at(t.h, 8, &row) == OBSLEARN_ERR_INVALID_ARGUMENT);
  CHECK(std::string(obslearn_last_error()).find("out of range") != std::string::npos);

  const std::string dir = support::make_temp_dir("capi_trace");
  const std::string csv_path = dir + "/t.csv";
  const std::string json_path = dir + "/t.json";
  REQUIRE(obslearn_trace_write_csv(t.h, g.h, csv_path.c_str()) == OBSLEARN_OK);
  REQUIRE(obslearn_trace_write_json(t.h, g.h, -0.1, 2.0, json_path.c_str()) == OBSLEARN_OK);
  CHECK(support::slurp(csv_path) == myopic_trace_csv(ref, model));
  CHECK(support::slurp(json_path) == myopic_trace_json(ref, model, -0.1, 2.0));

  CHECK(obslearn_trace_write_csv(t.h, g.h, (dir + "/no/such/dir.csv").c_str()) ==
        OBSLEARN_ERR_IO);
}

TEST_CASE("configs over the boundary") {
  config_guard c;
  REQUIRE(obslearn_config_default(&c.h) == OBSLEARN_OK);
  REQUIRE(c.h != nullptr);

  char buf[17];
  CHECK(obslearn_config_hash(c.h, buf, 16) == OBSLEARN_ERR_INVALID_ARGUMENT);
  REQUIRE(obslearn_config_hash(c.h, buf, sizeof buf) == OBSLEARN_OK);
  CHECK(std::strlen(buf) == 16);
  CHECK(std::string(buf) == experiment_config{}.hash());

  // Runtime knobs leave the hash alone; the seed does not.
  REQUIRE(obslearn_config_set_workers(c.h, 2) == OBSLEARN_OK);
  REQUIRE(obslearn_config_set_verbose(c.h, 1) == OBSLEARN_OK);
  char buf2[17];
  REQUIRE(obslearn_config_hash(c.h, buf2, sizeof buf2) == OBSLEARN_OK);
  CHECK(std::string(buf2) == std::string(buf));
  REQUIRE(obslearn_config_set_seed(c.h, 7) == OBSLEARN_OK);
  REQUIRE(obslearn_config_hash(c.h, buf2, sizeof buf2) == OBSLEARN_OK);
  CHECK(std::string(buf2) != std::string(buf));

  CHECK(obslearn_config_set_workers(c.h, 0) == OBSLEARN_ERR_CONFIG);
  CHECK(obslearn_config_set_output_dir(c.h, "") == OBSLEARN_ERR_CONFIG);

  const std::string dir = support::make_temp_dir("capi_cfg");
  support::spit(dir + "/run.json", "{\"horizon\": 12}");
  config_guard loaded;
  REQUIRE(obslearn_config_load((dir + "/run.json").c_str(), &loaded.h) == OBSLEARN_OK);
  char buf3[17];
  REQUIRE(obslearn_config_hash(loaded.h, buf3, sizeof buf3) == OBSLEARN_OK);
  experiment_config ref;
  ref.horizon = 12;
  CHECK(std::string(buf3) == ref.hash());

  config_guard missing;
  CHECK(obslearn_config_load((dir + "/absent.json").c_str(), &missing.h) == OBSLEARN_ERR_IO);
  CHECK(missing.h == nullptr);
  config_guard broken;
  support::spit(dir + "/broken.json", "{\"bogus\": 1}");
  CHECK(obslearn_config_load((dir + "/broken.json").c_str(), &broken.h) == OBSLEARN_ERR_CONFIG);
}

TEST_CASE("runners drive through the boundary") {
  config_guard c;
  REQUIRE(obslearn_config_default(&c.h) == OBSLEARN_OK);
  const std::string dir = support::make_temp_dir("capi_run");
  REQUIRE(obslearn_config_set_output_dir(c.h, dir.c_str()) == OBSLEARN_OK);

  int outcome = -1;
  REQUIRE(obslearn_run_simulate(c.h, 2.0, 3.0, &outcome) == OBSLEARN_OK);
  CHECK(outcome == 0);
  CHECK(support::file_exists(dir + "/manifest.json"));
  CHECK(support::file_exists(dir + "/trace.csv"));

  // Opposed signals never agree; a short horizon keeps the shrinking
  // windows comfortably above the quadrature mass cutoff.
  support::spit(dir + "/short.json", "{\"horizon\": 10}");
  config_guard shortc;
  REQUIRE(obslearn_config_load((dir + "/short.json").c_str(), &shortc.h) == OBSLEARN_OK);
  REQUIRE(obslearn_config_set_output_dir(shortc.h, (dir + "/dis").c_str()) == OBSLEARN_OK);
  REQUIRE(obslearn_run_simulate(shortc.h, 0.5, -0.5, &outcome) == OBSLEARN_OK);
  CHECK(outcome == 2);
}
