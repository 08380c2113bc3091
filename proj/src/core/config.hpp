#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/expectation.hpp"
#include "core/trie.hpp"

namespace obslearn {

// Everything a run needs, loadable from JSON. Unknown keys are rejected;
// missing keys take the defaults below. workers/verbose are runtime knobs,
// not part of the file schema or the hash.
struct experiment_config {
  double sigma0 = 1.0, sigma_a = 1.0, sigma_b = 1.0;
  double delta_a = 0.9, delta_b = 0.9;
  int horizon = 60;
  belief_policy policy = belief_policy::inertia;
  quad_settings quad;
  double root_tol = 1e-9;

  int type_points = 41;
  double type_span_sigmas = 3.0;
  double threshold_exclusion = 1e-3;
  int aggregation_points = 200;
  double aggregation_span_sigmas = 3.0;
  double indifference_band = 1e-3;
  int dominance_points = 101;
  double dominance_max = 10.0;

  double epsilon_max = 1e-1, epsilon_min = 1e-6, epsilon_ratio = 10.0;
  std::vector<double> scale_factors = {0.5, 2.0};
  int construction_cap = 10000;
  int mc_samples = 400000;
  std::uint64_t seed = 20260817;
  std::string output_dir = "out";

  int workers = 1;      // runtime only
  bool verbose = false; // runtime only

  static experiment_config load(const std::string& path);
  static experiment_config parse(const std::string& json_text);

  void validate() const;
  std::string canonical_json() const;
  std::string hash() const;  // fnv1a64 of canonical_json, 16 hex chars

  gaussian_model make_model() const;
  engine_settings make_engine_settings() const;
};

}  // namespace obslearn
