#pragma once

#include <map>
#include <optional>
#include <shared_mutex>
#include <tuple>

#include "core/interval.hpp"
#include "core/model.hpp"
#include "core/quadrature.hpp"

namespace obslearn {

struct engine_settings {
  quad_settings quad;
  double root_tol = 1e-9;

  void validate() const {
    quad.validate();
    if (!(root_tol > 0.0 && root_tol < 1.0)) fail(errc::invalid_argument, "engine_settings: root_tol outside (0,1)");
  }
};

// Conditional-expectation services for one model. Thresholds are cached by
// (player, interval); the cache is safe to share across threads.
class expectation_engine {
public:
  expectation_engine(const gaussian_model& model, const engine_settings& settings);

  const gaussian_model& model() const { return model_; }
  const engine_settings& settings() const { return settings_; }

  // Density of the opponent's signal at t given own signal, restricted to S
  // and renormalized. Zero outside S.
  double conditional_type_density(player observer, double s_own, double t,
                                  const belief_interval& S) const;

  // E[x | s_own, s_other in S]. Degenerate S = {p} short-circuits to the
  // two-signal posterior mean.
  double truncated_expectation(player observer, double s_own, const belief_interval& S) const;

  // E[x | s_own] with no information about the opponent.
  double marginal_expectation(player observer, double s_own) const;

  // P(s_other in S | s_own).
  double type_probability(player observer, double s_own, const belief_interval& S) const;

  // Zero of truncated_expectation in s_own for fixed S, to |residual| <= root_tol.
  double myopic_threshold(player i, const belief_interval& S_other) const;

  // +1 / -1 when one action is optimal against every type in S_other, else nullopt.
  std::optional<int> dominant_action(player i, double s_own, const belief_interval& S_other) const;

  // Effective integration window for the opponent-type density given s_own:
  // S clipped to mean +- tail_z sds. Empty windows come back ok=false.
  intersect_result effective_window(player observer, double s_own, const belief_interval& S) const;

  double tail_z() const { return tail_z_; }

private:
  double raw_mass(player observer, double s_own, const belief_interval& S) const;

  // truncated_expectation without the mass refusal: when S carries negligible
  // mass given s_own it returns the limit value, the pairwise posterior mean
  // at the point of S nearest the conditional mean. Threshold solves probe
  // far outside the root and need this to stay defined everywhere.
  double window_mean_unchecked(player observer, double s_own, const belief_interval& S) const;

  gaussian_model model_;
  engine_settings settings_;
  double tail_z_;

  mutable std::map<std::tuple<int, double, double>, double> threshold_cache_;
  mutable std::shared_mutex cache_mutex_;
};

}  // namespace obslearn
