#include "core/value.hpp"

#include <cmath>

#include "core/normal.hpp"

namespace obslearn {

namespace {

struct ev_state {
  const expectation_engine& eng;
  belief_trie& trie;
  const value_request& req;
  double acc = 0.0;  // sum over leaves of W * integral(e * density) over the leaf cell
};

// Contribution of a finished branch: discounted own-action sum W times the
// unnormalized expectation of the state over opponent types in `cell`.
void leaf(ev_state& st, const belief_interval& cell, double weight) {
  if (weight == 0.0) return;
  const intersect_result win = st.eng.effective_window(st.req.who, st.req.s_own, cell);
  if (!win.ok || !(win.value.lo < win.value.hi)) return;
  const gaussian_model& m = st.eng.model();
  const double mean = m.cond_mean_coef(st.req.who) * st.req.s_own;
  const double sd = m.cond_sd(st.req.who);
  auto f = [&](double t) {
    return m.posterior_mean_as(st.req.who, st.req.s_own, t) * normal_pdf((t - mean) / sd) / sd;
  };
  st.acc += weight * integrate(f, win.value.lo, win.value.hi, st.eng.settings().quad);
}

void recurse(ev_state& st, belief_trie::node* node, const belief_interval& cell, int t_rel,
             double disc, double weight) {
  if (t_rel == st.req.horizon) {
    leaf(st, cell, weight);
    return;
  }
  const int z_own = action_of(st.req.own, st.eng, st.req.who, st.req.s_own, *node);
  const double mu_opp = threshold_of(st.req.opp, st.eng, opponent(st.req.who), *node);
  const double w_next = weight + disc * z_own;
  const int abs_date = node->date;

  auto descend = [&](const belief_interval& sub, int z_opp) {
    if (!(sub.lo < sub.hi)) return;  // zero-width slice carries no mass
    action_pair z = st.req.who == player::a ? action_pair{z_own, z_opp} : action_pair{z_opp, z_own};
    belief_trie::node* kid = st.trie.child(node, z);
    const bool settled = kid->s_a == node->s_a && kid->s_b == node->s_b &&
                         kid->mu_a == node->mu_a && kid->mu_b == node->mu_b &&
                         st.req.own.stationary_after(abs_date + 1) &&
                         st.req.opp.stationary_after(abs_date + 1);
    if (settled) {
      // Beliefs and cutoffs are fixed points, both strategies are history-
      // stationary: every remaining date repeats this action pair.
      double w_tail = w_next;
      double d = disc;
      for (int u = t_rel + 1; u < st.req.horizon; ++u) {
        d *= st.req.delta;
        w_tail += d * z_own;
      }
      leaf(st, sub, w_tail);
      return;
    }
    recurse(st, kid, sub, t_rel + 1, disc * st.req.delta, w_next);
  };

  if (mu_opp <= cell.lo) {
    descend(cell, +1);
  } else if (mu_opp > cell.hi) {
    descend(cell, -1);
  } else {
    descend(belief_interval{cell.lo, mu_opp}, -1);
    descend(belief_interval{mu_opp, cell.hi}, +1);
  }
}

}  // namespace

double expected_value(const expectation_engine& eng, belief_trie& trie, const value_request& req) {
  if (std::isnan(req.s_own) || !std::isfinite(req.s_own))
    fail(errc::invalid_argument, "expected_value: s_own must be finite");
  if (req.horizon < 1) fail(errc::invalid_argument, "expected_value: horizon must be >= 1");
  if (!(req.delta > 0.0 && req.delta < 1.0))
    fail(errc::invalid_argument, "expected_value: delta must lie in (0,1)");
  req.own.validate();
  req.opp.validate();
  if (!req.opp.threshold_class())
    fail(errc::unsupported, "expected_value: opponent strategy must be threshold-class");

  belief_trie::node* at = trie.walk(req.context);
  const belief_interval prior = req.who == player::a ? at->s_b : at->s_a;
  const double mass = eng.type_probability(req.who, req.s_own, prior);
  if (!(mass >= eng.settings().quad.tail_mass_cutoff))
    fail(errc::degenerate_support, "expected_value: conditioning prior carries negligible mass");

  ev_state st{eng, trie, req, 0.0};
  recurse(st, at, prior, 0, 1.0, 0.0);
  return st.acc / mass;
}

belief_trie make_trie(const expectation_engine& eng, const value_request& req) {
  const strategy_spec& pa = req.who == player::a ? req.own.presumed() : req.opp.presumed();
  const strategy_spec& pb = req.who == player::a ? req.opp.presumed() : req.own.presumed();
  return belief_trie(eng, pa, pb, req.policy);
}

belief_trie make_trie(const expectation_engine& eng, const gap_request& req) {
  const strategy_spec& pa = req.who == player::a ? req.baseline.presumed() : req.opp.presumed();
  const strategy_spec& pb = req.who == player::a ? req.opp.presumed() : req.baseline.presumed();
  return belief_trie(eng, pa, pb, req.policy);
}

double deviation_gap(const expectation_engine& eng, belief_trie& trie, const gap_request& req) {
  if (req.deviation.presumed().label() != req.baseline.presumed().label())
    fail(errc::precondition, "deviation_gap: deviation and baseline presume different strategies");
  value_request vr;
  vr.who = req.who;
  vr.s_own = req.s_own;
  vr.opp = req.opp;
  vr.context = req.context;
  vr.horizon = req.horizon;
  vr.delta = req.delta;
  vr.policy = req.policy;

  vr.own = req.deviation;
  const double dev = expected_value(eng, trie, vr);
  vr.own = req.baseline;
  const double base = expected_value(eng, trie, vr);
  return dev - base;
}

}  // namespace obslearn
