#include "core/play.hpp"

#include <cmath>

namespace obslearn {

play_trace play(const expectation_engine& eng, double s_a, double s_b, const strategy_spec& strat_a,
                const strategy_spec& strat_b, const play_settings& settings) {
  if (std::isnan(s_a) || std::isnan(s_b) || !std::isfinite(s_a) || !std::isfinite(s_b))
    fail(errc::invalid_argument, "play: signals must be finite");
  if (settings.horizon < 1) fail(errc::invalid_argument, "play: horizon must be >= 1");
  if (!(settings.delta_a > 0.0 && settings.delta_a < 1.0) ||
      !(settings.delta_b > 0.0 && settings.delta_b < 1.0))
    fail(errc::invalid_argument, "play: discount factors must lie in (0,1)");
  strat_a.validate();
  strat_b.validate();

  belief_trie trie(eng, strat_a.presumed(), strat_b.presumed(), settings.policy);
  belief_trie::node* node = trie.root();

  play_trace tr;
  tr.delta_a = settings.delta_a;
  tr.delta_b = settings.delta_b;
  tr.rows.reserve(static_cast<size_t>(settings.horizon));

  const double stage = eng.model().posterior_mean(s_a, s_b);
  double disc_a = 1.0, disc_b = 1.0;
  for (int t = 0; t < settings.horizon; ++t) {
    play_row row;
    row.date = t;
    row.s_a = node->s_a;
    row.s_b = node->s_b;
    row.m_a = node->mu_a;
    row.m_b = node->mu_b;
    row.z_a = action_of(strat_a, eng, player::a, s_a, *node);
    row.z_b = action_of(strat_b, eng, player::b, s_b, *node);
    row.agreed = row.z_a == row.z_b;
    row.stage_payoff_a = row.z_a * stage;
    row.stage_payoff_b = row.z_b * stage;

    belief_trie::node* next = trie.child(node, {row.z_a, row.z_b});
    row.off_path = next->off_a || next->off_b;
    if (next->off_a)
      tr.events.push_back({t, player::a, "action inconsistent with presumed cutoff"});
    if (next->off_b)
      tr.events.push_back({t, player::b, "action inconsistent with presumed cutoff"});

    tr.rows.push_back(row);
    if (row.agreed && tr.first_agreement < 0) tr.first_agreement = t;
    tr.total_a += disc_a * row.stage_payoff_a;
    tr.total_b += disc_b * row.stage_payoff_b;
    disc_a *= settings.delta_a;
    disc_b *= settings.delta_b;
    node = next;
  }
  return tr;
}

}  // namespace obslearn
