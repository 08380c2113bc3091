#include "core/config.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "core/serialize.hpp"

namespace obslearn {

namespace {

using nlohmann::json;

void expect_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(errc::config, "config: " + where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      fail(errc::config, "config: unknown key \"" + it.key() + "\" in " + where);
}

double num(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) fail(errc::config, "config: " + key + " must be a number");
  return v.get<double>();
}

int integer(const json& j, const std::string& key, int fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail(errc::config, "config: " + key + " must be an integer");
  return v.get<int>();
}

}  // namespace

experiment_config experiment_config::load(const std::string& path) {
  return parse(read_text_file(path));
}

experiment_config experiment_config::parse(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    fail(errc::config, std::string("config: malformed JSON: ") + e.what());
  }
  expect_keys(j, "top level",
              {"model", "discount", "horizon", "belief_policy", "quadrature", "root_tol", "grids",
               "epsilon_search", "scale_factors", "construction_cap", "mc_samples", "seed",
               "output_dir"});

  experiment_config c;
  if (j.contains("model")) {
    const json& m = j.at("model");
    expect_keys(m, "model", {"sigma0", "sigma_a", "sigma_b"});
    c.sigma0 = num(m, "sigma0", c.sigma0);
    c.sigma_a = num(m, "sigma_a", c.sigma_a);
    c.sigma_b = num(m, "sigma_b", c.sigma_b);
  }
  if (j.contains("discount")) {
    const json& d = j.at("discount");
    expect_keys(d, "discount", {"delta_a", "delta_b"});
    c.delta_a = num(d, "delta_a", c.delta_a);
    c.delta_b = num(d, "delta_b", c.delta_b);
  }
  c.horizon = integer(j, "horizon", c.horizon);
  if (j.contains("belief_policy")) {
    const json& p = j.at("belief_policy");
    if (!p.is_string()) fail(errc::config, "config: belief_policy must be a string");
    const std::string s = p.get<std::string>();
    if (s == "inertia")
      c.policy = belief_policy::inertia;
    else if (s == "reset")
      c.policy = belief_policy::reset;
    else
      fail(errc::config, "config: belief_policy must be \"inertia\" or \"reset\"");
  }
  if (j.contains("quadrature")) {
    const json& q = j.at("quadrature");
    expect_keys(q, "quadrature", {"abs_tol", "rel_tol", "max_subdivisions", "tail_mass_cutoff"});
    c.quad.abs_tol = num(q, "abs_tol", c.quad.abs_tol);
    c.quad.rel_tol = num(q, "rel_tol", c.quad.rel_tol);
    c.quad.max_subdivisions = integer(q, "max_subdivisions", c.quad.max_subdivisions);
    c.quad.tail_mass_cutoff = num(q, "tail_mass_cutoff", c.quad.tail_mass_cutoff);
  }
  c.root_tol = num(j, "root_tol", c.root_tol);
  if (j.contains("grids")) {
    const json& g = j.at("grids");
    expect_keys(g, "grids",
                {"type_points", "type_span_sigmas", "threshold_exclusion", "aggregation_points",
                 "aggregation_span_sigmas", "indifference_band", "dominance_points", "dominance_max"});
    c.type_points = integer(g, "type_points", c.type_points);
    c.type_span_sigmas = num(g, "type_span_sigmas", c.type_span_sigmas);
    c.threshold_exclusion = num(g, "threshold_exclusion", c.threshold_exclusion);
    c.aggregation_points = integer(g, "aggregation_points", c.aggregation_points);
    c.aggregation_span_sigmas = num(g, "aggregation_span_sigmas", c.aggregation_span_sigmas);
    c.indifference_band = num(g, "indifference_band", c.indifference_band);
    c.dominance_points = integer(g, "dominance_points", c.dominance_points);
    c.dominance_max = num(g, "dominance_max", c.dominance_max);
  }
  if (j.contains("epsilon_search")) {
    const json& e = j.at("epsilon_search");
    expect_keys(e, "epsilon_search", {"max", "min", "ratio"});
    c.epsilon_max = num(e, "max", c.epsilon_max);
    c.epsilon_min = num(e, "min", c.epsilon_min);
    c.epsilon_ratio = num(e, "ratio", c.epsilon_ratio);
  }
  if (j.contains("scale_factors")) {
    const json& s = j.at("scale_factors");
    if (!s.is_array()) fail(errc::config, "config: scale_factors must be an array");
    c.scale_factors.clear();
    for (const json& v : s) {
      if (!v.is_number()) fail(errc::config, "config: scale_factors entries must be numbers");
      c.scale_factors.push_back(v.get<double>());
    }
  }
  c.construction_cap = integer(j, "construction_cap", c.construction_cap);
  c.mc_samples = integer(j, "mc_samples", c.mc_samples);
  if (j.contains("seed")) {
    const json& v = j.at("seed");
    if (!v.is_number_unsigned() && !v.is_number_integer())
      fail(errc::config, "config: seed must be a nonnegative integer");
    if (v.is_number_integer() && v.get<std::int64_t>() < 0)
      fail(errc::config, "config: seed must be a nonnegative integer");
    c.seed = v.get<std::uint64_t>();
  }
  if (j.contains("output_dir")) {
    const json& v = j.at("output_dir");
    if (!v.is_string()) fail(errc::config, "config: output_dir must be a string");
    c.output_dir = v.get<std::string>();
  }
  c.validate();
  return c;
}

void experiment_config::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0)) fail(errc::config, std::string("config: ") + name + " must be positive and finite");
  };
  positive(sigma0, "sigma0");
  positive(sigma_a, "sigma_a");
  positive(sigma_b, "sigma_b");
  if (!(delta_a > 0.0 && delta_a < 1.0) || !(delta_b > 0.0 && delta_b < 1.0))
    fail(errc::config, "config: discount factors must lie strictly inside (0,1)");
  if (horizon < 1) fail(errc::config, "config: horizon must be >= 1");
  try {
    quad_settings q = quad;
    q.validate();
    engine_settings es{q, root_tol};
    es.validate();
  } catch (const error& e) {
    fail(errc::config, std::string("config: ") + e.what());
  }
  if (type_points < 2) fail(errc::config, "config: type_points must be >= 2");
  positive(type_span_sigmas, "type_span_sigmas");
  if (!(threshold_exclusion >= 0.0)) fail(errc::config, "config: threshold_exclusion must be >= 0");
  if (aggregation_points < 2) fail(errc::config, "config: aggregation_points must be >= 2");
  positive(aggregation_span_sigmas, "aggregation_span_sigmas");
  if (!(indifference_band >= 0.0)) fail(errc::config, "config: indifference_band must be >= 0");
  if (dominance_points < 2) fail(errc::config, "config: dominance_points must be >= 2");
  positive(dominance_max, "dominance_max");
  if (!(epsilon_max > 0.0 && epsilon_min > 0.0 && epsilon_max >= epsilon_min))
    fail(errc::config, "config: epsilon_search needs 0 < min <= max");
  if (!(epsilon_ratio > 1.0)) fail(errc::config, "config: epsilon_search ratio must exceed 1");
  if (scale_factors.empty()) fail(errc::config, "config: scale_factors must be nonempty");
  for (double f : scale_factors)
    if (!(std::isfinite(f) && f > 0.0) || f == 1.0)
      fail(errc::config, "config: scale factors must be positive, finite, and != 1");
  if (construction_cap < 1) fail(errc::config, "config: construction_cap must be >= 1");
  if (mc_samples < 1000) fail(errc::config, "config: mc_samples must be >= 1000");
  if (output_dir.empty()) fail(errc::config, "config: output_dir must be nonempty");
  if (workers < 1 || workers > 64) fail(errc::config, "config: workers must lie in [1, 64]");
}

std::string experiment_config::canonical_json() const {
  json_writer w;
  w.begin_object();
  w.key("model");
  w.begin_object();
  w.kv("sigma0", sigma0);
  w.kv("sigma_a", sigma_a);
  w.kv("sigma_b", sigma_b);
  w.end_object();
  w.key("discount");
  w.begin_object();
  w.kv("delta_a", delta_a);
  w.kv("delta_b", delta_b);
  w.end_object();
  w.kv("horizon", horizon);
  w.kv("belief_policy", policy_name(policy));
  w.key("quadrature");
  w.begin_object();
  w.kv("abs_tol", quad.abs_tol);
  w.kv("rel_tol", quad.rel_tol);
  w.kv("max_subdivisions", quad.max_subdivisions);
  w.kv("tail_mass_cutoff", quad.tail_mass_cutoff);
  w.end_object();
  w.kv("root_tol", root_tol);
  w.key("grids");
  w.begin_object();
  w.kv("type_points", type_points);
  w.kv("type_span_sigmas", type_span_sigmas);
  w.kv("threshold_exclusion", threshold_exclusion);
  w.kv("aggregation_points", aggregation_points);
  w.kv("aggregation_span_sigmas", aggregation_span_sigmas);
  w.kv("indifference_band", indifference_band);
  w.kv("dominance_points", dominance_points);
  w.kv("dominance_max", dominance_max);
  w.end_object();
  w.key("epsilon_search");
  w.begin_object();
  w.kv("max", epsilon_max);
  w.kv("min", epsilon_min);
  w.kv("ratio", epsilon_ratio);
  w.end_object();
  w.key("scale_factors");
  w.begin_array();
  for (double f : scale_factors) w.value(f);
  w.end_array();
  w.kv("construction_cap", construction_cap);
  w.kv("mc_samples", mc_samples);
  w.kv("seed", seed);
  w.kv("output_dir", output_dir);
  w.end_object();
  return w.str();
}

std::string experiment_config::hash() const { return hex16(fnv1a64(canonical_json())); }

gaussian_model experiment_config::make_model() const { return gaussian_model(sigma0, sigma_a, sigma_b); }

engine_settings experiment_config::make_engine_settings() const { return engine_settings{quad, root_tol}; }

}  // namespace obslearn
