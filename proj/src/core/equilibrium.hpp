#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "core/value.hpp"

namespace obslearn {

struct deviation_report {
  player who = player::a;
  double type_value = 0.0;
  std::string script;
  double gap = std::numeric_limits<double>::quiet_NaN();
  // Filled by the asymmetric-construction flow only:
  double epsilon = std::numeric_limits<double>::quiet_NaN();
  double lower_bound = std::numeric_limits<double>::quiet_NaN();
  double pi = std::numeric_limits<double>::quiet_NaN();
  double delta_gain = std::numeric_limits<double>::quiet_NaN();
  double q = std::numeric_limits<double>::quiet_NaN();
  double q_prime = std::numeric_limits<double>::quiet_NaN();
  int cap_k = -1;
};

struct sweep_request {
  double delta_a = 0.9, delta_b = 0.9;
  int horizon = 60;
  belief_policy policy = belief_policy::inertia;
  std::vector<double> type_grid;
  int workers = 1;
};

// Myopic-play equilibrium check on a symmetric model: for both players, every
// grid type, and every default deviation script, the gain from deviating.
std::vector<deviation_report> check_symmetric_equilibrium(const expectation_engine& eng,
                                                          const sweep_request& req);

// The default deviation class: flip at one of the first three dates, with and
// without flipping back at the next date.
std::vector<strategy_spec> default_deviation_scripts();

// Grid of types spanning +-span_sigmas unconditional signal sds, dropping
// points within `exclusion` of any cutoff reachable in `depth` myopic dates.
std::vector<double> default_type_grid(const expectation_engine& eng, player i, int points,
                                      double span_sigmas, double exclusion, int depth = 3);

struct escape_construction {
  gaussian_model model;  // frame model; roles swapped when reflected
  bool reflected = false;
  double m_a = 0.0, m_b = 0.0;          // date-1 cutoffs after a -/+ split
  double m_a_prime = 0.0, m_b_prime = 0.0;  // cutoffs against the opponent's singleton
  std::vector<double> r_seq, s_seq;     // r^0 = s^0 = 0, r^{k+1} = h(s^k), s^{k+1} = g(r^k)
  int cap_k = 0;                        // first k with r^k < m_a
  double q = 0.0, q_prime = 0.0;        // evaluated at s_own = m_a
};

// Builds the alternating cutoff recursion for an asymmetric model and finds
// the escape index. Tries the mirrored role assignment when the direct one
// stalls. iteration_cap bounds the recursion length.
escape_construction construct_escape(const expectation_engine& eng, int iteration_cap);

// Analytic lower bound on the gain of the one-date upward deviation by the
// type m_a - epsilon, over `horizon` dates following the first split.
// Requires m_a - epsilon > max(m_a_prime, r^K).
deviation_report deviation_gain_bound(const expectation_engine& eng,
                                      const escape_construction& c, double delta, double epsilon,
                                      int horizon);

// Walks epsilon down a geometric grid until the bound turns positive.
struct epsilon_grid {
  double max = 1e-1, min = 1e-6, ratio = 10.0;
};
std::optional<deviation_report> find_profitable_epsilon(const expectation_engine& eng,
                                                        const escape_construction& c, double delta,
                                                        int horizon, const epsilon_grid& grid);

// Measured discounted gain of that same deviation, by direct integration.
double simulated_deviation_gain(const expectation_engine& eng, const escape_construction& c,
                                double delta, double epsilon, int horizon, belief_policy policy);

struct aggregation_report {
  std::string profile;
  int grid_n = 0;
  double span = 0.0;
  int sampled = 0;
  int excluded = 0;
  int wrong = 0;
  int unsettled = 0;  // grids whose play never became stationary in the horizon
  double mismatch_fraction = 0.0;
  struct point {
    double s_a, s_b;
    int final_action;  // 0 when never settled
  };
  std::vector<point> mismatch_points;
};

struct aggregation_request {
  strategy_spec strat_a, strat_b;
  std::string profile_label;
  int grid_n = 200;
  double span_sigmas = 3.0;
  double band = 1e-3;
  int horizon = 60;
  int workers = 1;
};

// Fraction of signal-grid pairs whose long-run agreed action disagrees with
// the sign of the full-information posterior mean.
aggregation_report aggregation_score(const expectation_engine& eng, const aggregation_request& req);

// Smallest grid type s >= 0 at which the one-shot informational loss from the
// wrong action outweighs the largest discounted continuation advantage any
// two-threshold experiment can buy; +inf when no grid point qualifies.
struct dominance_row {
  double s = 0.0;
  double stage_loss = 0.0;       // myopic stage-payoff margin at s
  double continuation_cap = 0.0; // discounted cap on future informational gains
  bool dominated = false;
};
struct dominance_report {
  double threshold = std::numeric_limits<double>::infinity();
  std::vector<dominance_row> rows;
};
dominance_report two_threshold_dominance_bound(const expectation_engine& eng, double delta,
                                               int points, double grid_max);

}  // namespace obslearn
