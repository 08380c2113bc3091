#pragma once

#include "core/play.hpp"

namespace obslearn {

// Discounted expected payoff of `own` for a single type s_own, integrating
// over opponent types in the prior carried by the context node. Dates are
// counted from the context: play covers `horizon` dates discounted delta^0
// onward; forced script dates are absolute (context dates included).
struct value_request {
  player who = player::a;
  double s_own = 0.0;
  strategy_spec own;              // realized strategy (may be a script)
  strategy_spec opp;              // opponent: threshold-class, realized == presumed
  history context;                // conditioning history; beliefs replayed through it
  int horizon = 1;                // dates played after the context
  double delta = 0.9;
  belief_policy policy = belief_policy::inertia;
};

double expected_value(const expectation_engine& eng, belief_trie& trie, const value_request& req);

struct gap_request {
  player who = player::a;
  double s_own = 0.0;
  strategy_spec deviation;
  strategy_spec baseline;
  strategy_spec opp;
  history context;
  int horizon = 1;
  double delta = 0.9;
  belief_policy policy = belief_policy::inertia;
};

// expected_value(deviation) - expected_value(baseline), on a shared trie.
// Deviation and baseline must carry the same presumption.
double deviation_gap(const expectation_engine& eng, belief_trie& trie, const gap_request& req);

// Convenience: builds a trie matching the request's presumptions.
belief_trie make_trie(const expectation_engine& eng, const value_request& req);
belief_trie make_trie(const expectation_engine& eng, const gap_request& req);

}  // namespace obslearn
