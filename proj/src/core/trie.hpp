#pragma once

#include <array>
#include <memory>
#include <mutex>

#include "core/strategy.hpp"

namespace obslearn {

// What happens to a belief interval when the observed action contradicts it.
// inertia keeps the interval; reset rolls back to the most recent prior that
// admits the move, then applies the move to that prior.
enum class belief_policy { inertia, reset };

inline const char* policy_name(belief_policy p) { return p == belief_policy::inertia ? "inertia" : "reset"; }

// Belief states reachable under a fixed pair of presumed strategies, indexed
// by action history. Nodes are built lazily and shared; walking the same
// history twice costs one map of pointer hops. Safe for concurrent readers
// and builders.
class belief_trie {
public:
  struct node {
    belief_interval s_a, s_b;   // intervals at the start of this date
    double mu_a = 0.0, mu_b = 0.0;  // presumed cutoffs for this date
    node* parent = nullptr;
    int date = 0;
    bool off_a = false, off_b = false;  // the arriving pair was off-path for that player
    history hist;
    std::array<std::unique_ptr<node>, 4> kids;
  };

  belief_trie(const expectation_engine& eng, strategy_spec presumed_a, strategy_spec presumed_b,
              belief_policy policy);

  node* root() { return &root_; }
  node* child(node* n, action_pair z);
  node* walk(const history& h);

  const expectation_engine& engine() const { return eng_; }
  belief_policy policy() const { return policy_; }
  const strategy_spec& presumed(player i) const { return i == player::a ? presumed_a_ : presumed_b_; }

private:
  static int slot(action_pair z) { return (z.z_a > 0 ? 2 : 0) + (z.z_b > 0 ? 1 : 0); }
  void fill_cutoffs(node* n);
  belief_interval stepped(node* n, player i, int z, bool* off) const;

  const expectation_engine& eng_;
  strategy_spec presumed_a_, presumed_b_;
  belief_policy policy_;
  node root_;
  std::mutex mu_;
};

// Cutoff the given threshold-class strategy uses at this node for player i.
double threshold_of(const strategy_spec& strat, const expectation_engine& eng, player i,
                    const belief_trie::node& at);

// Action the (possibly scripted or two-threshold) strategy takes for player i
// with signal s_own at this node. `date` is the node's absolute date.
int action_of(const strategy_spec& strat, const expectation_engine& eng, player i, double s_own,
              const belief_trie::node& at);

}  // namespace obslearn
