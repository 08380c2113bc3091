#include "core/trie.hpp"

#include <algorithm>

namespace obslearn {

belief_trie::belief_trie(const expectation_engine& eng, strategy_spec presumed_a,
                         strategy_spec presumed_b, belief_policy policy)
    : eng_(eng), presumed_a_(std::move(presumed_a)), presumed_b_(std::move(presumed_b)), policy_(policy) {
  if (!presumed_a_.threshold_class() || !presumed_b_.threshold_class())
    fail(errc::unsupported, "belief_trie: presumed strategies must be threshold-class");
  presumed_a_.validate();
  presumed_b_.validate();
  root_.s_a = belief_interval::all();
  root_.s_b = belief_interval::all();
  root_.date = 0;
  fill_cutoffs(&root_);
}

void belief_trie::fill_cutoffs(node* n) {
  n->mu_a = threshold_of(presumed_a_, eng_, player::a, *n);
  n->mu_b = threshold_of(presumed_b_, eng_, player::b, *n);
}

// Next interval for player i after it is seen playing z against cutoff mu at
// node n. Off-path moves are resolved by the policy.
belief_interval belief_trie::stepped(node* n, player i, int z, bool* off) const {
  const belief_interval& cur = i == player::a ? n->s_a : n->s_b;
  const double mu = i == player::a ? n->mu_a : n->mu_b;
  *off = false;
  if (action_consistent(cur, mu, z)) return apply_action(cur, mu, z);
  *off = true;
  if (policy_ == belief_policy::inertia) return cur;
  for (node* p = n->parent; p != nullptr; p = p->parent) {
    const belief_interval& prior = i == player::a ? p->s_a : p->s_b;
    const double pmu = i == player::a ? p->mu_a : p->mu_b;
    if (action_consistent(prior, pmu, z)) return apply_action(prior, pmu, z);
  }
  // The full-support root admits every move; unreachable.
  fail(errc::internal, "belief_trie: reset found no admitting prior");
}

belief_trie::node* belief_trie::child(node* n, action_pair z) {
  check_action(z.z_a, "belief_trie");
  check_action(z.z_b, "belief_trie");
  const int s = slot(z);
  std::lock_guard lock(mu_);
  if (n->kids[s]) return n->kids[s].get();
  auto kid = std::make_unique<node>();
  kid->parent = n;
  kid->date = n->date + 1;
  kid->hist = n->hist;
  kid->hist.push_back(z);
  kid->s_a = stepped(n, player::a, z.z_a, &kid->off_a);
  kid->s_b = stepped(n, player::b, z.z_b, &kid->off_b);
  fill_cutoffs(kid.get());
  n->kids[s] = std::move(kid);
  return n->kids[s].get();
}

belief_trie::node* belief_trie::walk(const history& h) {
  node* n = &root_;
  for (const action_pair& z : h) n = child(n, z);
  return n;
}

double threshold_of(const strategy_spec& strat, const expectation_engine& eng, player i,
                    const belief_trie::node& at) {
  const belief_interval& s_opp = i == player::a ? at.s_b : at.s_a;
  switch (strat.k) {
    case strategy_spec::kind::myopic:
      return eng.myopic_threshold(i, s_opp);
    case strategy_spec::kind::threshold_map: {
      double scale = 1.0;
      for (const auto& o : strat.scale_overrides)
        if (o.at == at.hist) {
          scale = o.scale;
          break;
        }
      return scale * eng.myopic_threshold(i, s_opp);
    }
    case strategy_spec::kind::two_threshold_map:
      fail(errc::unsupported, "threshold_of: two-threshold strategies have no single cutoff");
    case strategy_spec::kind::deviation_script:
      fail(errc::unsupported, "threshold_of: scripts have no cutoff; use their base");
  }
  fail(errc::internal, "threshold_of: unknown strategy kind");
}

int action_of(const strategy_spec& strat, const expectation_engine& eng, player i, double s_own,
              const belief_trie::node& at) {
  switch (strat.k) {
    case strategy_spec::kind::myopic:
    case strategy_spec::kind::threshold_map:
      return s_own >= threshold_of(strat, eng, i, at) ? +1 : -1;
    case strategy_spec::kind::two_threshold_map: {
      for (const auto& r : strat.rules)
        if (r.at == at.hist) {
          const bool inside = r.mu1 < s_own && s_own < r.mu2;
          return inside ? -r.outer_action : r.outer_action;
        }
      fail(errc::incomplete_strategy, "action_of: two-threshold map has no rule for history " +
                                          history_label(at.hist));
    }
    case strategy_spec::kind::deviation_script: {
      for (const auto& f : strat.forced)
        if (f.first == at.date) return f.second;
      return action_of(*strat.base, eng, i, s_own, at);
    }
  }
  fail(errc::internal, "action_of: unknown strategy kind");
}

}  // namespace obslearn
