#pragma once

#include <vector>

#include "core/expectation.hpp"
#include "core/interval.hpp"

namespace obslearn {

// One date's simultaneous action pair.
struct action_pair {
  int z_a = 0;  // each is -1 or +1
  int z_b = 0;

  friend bool operator==(const action_pair& x, const action_pair& y) {
    return x.z_a == y.z_a && x.z_b == y.z_b;
  }
};

inline void check_action(int z, const char* who) {
  if (z != -1 && z != 1) fail(errc::invalid_argument, std::string(who) + ": action must be -1 or +1");
}

// Public belief state at the start of a date: S_i is what the opponent knows
// about player i's type, m_i the myopic cutoff implied by the opposing
// interval. Ties s == m are read as +1 throughout.
struct configuration {
  belief_interval s_a = belief_interval::all();
  belief_interval s_b = belief_interval::all();
  double m_a = 0.0;
  double m_b = 0.0;
  int date = 0;
};

// Whether action z is consistent with a threshold rule at cutoff m on S: the
// surviving subinterval must be nonempty. For the singleton {p}, +1 iff p >= m.
bool action_consistent(const belief_interval& S, double m, int z);

// S restricted to the types that play z at cutoff m. Requires consistency.
belief_interval apply_action(const belief_interval& S, double m, int z);

configuration initial_configuration(const expectation_engine& eng);

// One myopic update step. Both moves must be on-path under the myopic
// cutoffs; off-path pairs raise an error here (policies live in play()).
configuration update_beliefs(const expectation_engine& eng, const configuration& c, action_pair z);

struct myopic_row {
  int date = 0;
  int z_a = 0, z_b = 0;
  belief_interval s_a, s_b;  // intervals at the start of the date
  double m_a = 0.0, m_b = 0.0;
  bool agreed = false;
};

struct myopic_trace {
  std::vector<myopic_row> rows;
  int first_agreement = -1;  // date index, -1 if never within the horizon
};

// Myopic play of both signal realizations for `horizon` dates. Once actions
// agree the configuration is stationary; the tail rows are synthesized
// without further threshold solves.
myopic_trace evolve_myopic(const expectation_engine& eng, double s_a, double s_b, int horizon);

}  // namespace obslearn
