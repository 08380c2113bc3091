#pragma once

#include <string>
#include <vector>

#include "core/trie.hpp"

namespace obslearn {

struct play_row {
  int date = 0;
  int z_a = 0, z_b = 0;
  belief_interval s_a, s_b;  // intervals at the start of the date
  double m_a = 0.0, m_b = 0.0;  // presumed cutoffs
  bool agreed = false;
  double stage_payoff_a = 0.0, stage_payoff_b = 0.0;
  bool off_path = false;  // either move contradicted its presumed cutoff
};

struct off_path_event {
  int date = 0;
  player who = player::a;
  std::string note;
};

struct play_trace {
  std::vector<play_row> rows;
  std::vector<off_path_event> events;
  double delta_a = 0.0, delta_b = 0.0;
  double total_a = 0.0, total_b = 0.0;  // discounted payoff sums
  int first_agreement = -1;
};

struct play_settings {
  int horizon = 1;
  double delta_a = 0.9, delta_b = 0.9;
  belief_policy policy = belief_policy::inertia;
};

// Plays both realized strategies from the null history. Belief updates
// condition on each strategy's presumption, which must be threshold-class;
// realized play may be scripted or two-threshold.
play_trace play(const expectation_engine& eng, double s_a, double s_b, const strategy_spec& strat_a,
                const strategy_spec& strat_b, const play_settings& settings);

}  // namespace obslearn
