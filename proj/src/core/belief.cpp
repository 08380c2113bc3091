#include "core/belief.hpp"

#include <cmath>

namespace obslearn {

bool action_consistent(const belief_interval& S, double m, int z) {
  check_action(z, "action_consistent");
  if (S.singleton()) return z == +1 ? S.lo >= m : S.lo < m;
  return z == +1 ? m <= S.hi : m > S.lo;
}

belief_interval apply_action(const belief_interval& S, double m, int z) {
  if (!action_consistent(S, m, z))
    fail(errc::off_path, "apply_action: action inconsistent with threshold");
  if (S.singleton()) return S;
  belief_interval cut = z == +1 ? belief_interval::at_least(m) : belief_interval::at_most(m);
  intersect_result r = intersect(S, cut);
  if (!r.ok) fail(errc::off_path, "apply_action: empty update");
  return r.value;
}

configuration initial_configuration(const expectation_engine& eng) {
  configuration c;
  c.s_a = belief_interval::all();
  c.s_b = belief_interval::all();
  c.m_a = eng.myopic_threshold(player::a, c.s_b);
  c.m_b = eng.myopic_threshold(player::b, c.s_a);
  c.date = 0;
  return c;
}

configuration update_beliefs(const expectation_engine& eng, const configuration& c, action_pair z) {
  check_action(z.z_a, "update_beliefs");
  check_action(z.z_b, "update_beliefs");
  if (!action_consistent(c.s_a, c.m_a, z.z_a) || !action_consistent(c.s_b, c.m_b, z.z_b))
    fail(errc::off_path, "update_beliefs: off-path action pair");
  configuration next;
  next.s_a = apply_action(c.s_a, c.m_a, z.z_a);
  next.s_b = apply_action(c.s_b, c.m_b, z.z_b);
  next.m_a = eng.myopic_threshold(player::a, next.s_b);
  next.m_b = eng.myopic_threshold(player::b, next.s_a);
  next.date = c.date + 1;
  return next;
}

myopic_trace evolve_myopic(const expectation_engine& eng, double s_a, double s_b, int horizon) {
  if (std::isnan(s_a) || std::isnan(s_b) || !std::isfinite(s_a) || !std::isfinite(s_b))
    fail(errc::invalid_argument, "evolve_myopic: signals must be finite");
  if (horizon < 1) fail(errc::invalid_argument, "evolve_myopic: horizon must be >= 1");

  myopic_trace tr;
  tr.rows.reserve(static_cast<size_t>(horizon));
  configuration c = initial_configuration(eng);
  for (int t = 0; t < horizon; ++t) {
    myopic_row row;
    row.date = t;
    row.s_a = c.s_a;
    row.s_b = c.s_b;
    row.m_a = c.m_a;
    row.m_b = c.m_b;
    row.z_a = s_a >= c.m_a ? +1 : -1;
    row.z_b = s_b >= c.m_b ? +1 : -1;
    row.agreed = row.z_a == row.z_b;
    tr.rows.push_back(row);
    if (row.agreed && tr.first_agreement < 0) tr.first_agreement = t;

    action_pair z{row.z_a, row.z_b};
    configuration next = update_beliefs(eng, c, z);
    if (row.agreed && next.s_a == c.s_a && next.s_b == c.s_b) {
      // Stationary agreement: replay the same row to the horizon.
      for (int u = t + 1; u < horizon; ++u) {
        myopic_row rep = row;
        rep.date = u;
        tr.rows.push_back(rep);
      }
      return tr;
    }
    c = next;
  }
  return tr;
}

}  // namespace obslearn
