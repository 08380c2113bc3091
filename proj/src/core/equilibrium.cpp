#include "core/equilibrium.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace obslearn {

namespace {

int clamp_workers(int workers) { return std::max(1, std::min(workers, 64)); }

// Runs fn(i) for i in [0, n) across `workers` threads. Exceptions are
// rethrown on the caller thread. fn must only write to its own slot.
void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  workers = std::min(clamp_workers(workers), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (;;) {
          const int i = next.fetch_add(1);
          if (i >= n) return;
          fn(i);
        }
      } catch (...) {
        errors[static_cast<size_t>(w)] = std::current_exception();
        next.store(n);
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

std::vector<strategy_spec> default_deviation_scripts() {
  std::vector<strategy_spec> out;
  for (int d = 0; d <= 2; ++d) {
    for (int z : {-1, +1}) {
      out.push_back(strategy_spec::script(strategy_spec::myopic(), {{d, z}}));
      out.push_back(strategy_spec::script(strategy_spec::myopic(), {{d, z}, {d + 1, -z}}));
    }
  }
  return out;
}

std::vector<double> default_type_grid(const expectation_engine& eng, player i, int points,
                                      double span_sigmas, double exclusion, int depth) {
  if (points < 2) fail(errc::invalid_argument, "default_type_grid: points must be >= 2");
  const double span = span_sigmas * eng.model().signal_sd(i);

  // Cutoffs reachable in `depth` myopic dates, to steer clear of knife edges.
  std::vector<double> cutoffs;
  belief_trie trie(eng, strategy_spec::myopic(), strategy_spec::myopic(), belief_policy::inertia);
  std::vector<belief_trie::node*> frontier{trie.root()};
  for (int d = 0; d <= depth; ++d) {
    std::vector<belief_trie::node*> next;
    for (belief_trie::node* n : frontier) {
      cutoffs.push_back(i == player::a ? n->mu_a : n->mu_b);
      if (d == depth) continue;
      for (int za : {-1, +1})
        for (int zb : {-1, +1}) next.push_back(trie.child(n, {za, zb}));
    }
    frontier = std::move(next);
  }

  std::vector<double> grid;
  grid.reserve(static_cast<size_t>(points));
  const double step = 2.0 * span / (points - 1);
  for (int k = 0; k < points; ++k) {
    const double s = -span + step * k;
    bool near = false;
    for (double c : cutoffs)
      if (std::fabs(s - c) < exclusion) {
        near = true;
        break;
      }
    if (!near) grid.push_back(s);
  }
  return grid;
}

std::vector<deviation_report> check_symmetric_equilibrium(const expectation_engine& eng,
                                                          const sweep_request& req) {
  if (!eng.model().symmetric())
    fail(errc::precondition, "check_symmetric_equilibrium: model must be symmetric");
  if (req.type_grid.empty())
    fail(errc::invalid_argument, "check_symmetric_equilibrium: empty type grid");
  if (req.horizon < 1) fail(errc::invalid_argument, "check_symmetric_equilibrium: horizon must be >= 1");

  const std::vector<strategy_spec> scripts = default_deviation_scripts();
  struct task {
    player who;
    double type;
  };
  std::vector<task> tasks;
  for (player who : {player::a, player::b})
    for (double s : req.type_grid) tasks.push_back({who, s});

  belief_trie trie(eng, strategy_spec::myopic(), strategy_spec::myopic(), req.policy);
  std::vector<std::vector<deviation_report>> slots(tasks.size());

  parallel_for(static_cast<int>(tasks.size()), req.workers, [&](int idx) {
    const task& tk = tasks[static_cast<size_t>(idx)];
    const double delta = tk.who == player::a ? req.delta_a : req.delta_b;
    value_request vr;
    vr.who = tk.who;
    vr.s_own = tk.type;
    vr.own = strategy_spec::myopic();
    vr.opp = strategy_spec::myopic();
    vr.horizon = req.horizon;
    vr.delta = delta;
    vr.policy = req.policy;
    const double base = expected_value(eng, trie, vr);
    std::vector<deviation_report> local;
    local.reserve(scripts.size());
    for (const strategy_spec& sc : scripts) {
      vr.own = sc;
      deviation_report r;
      r.who = tk.who;
      r.type_value = tk.type;
      r.script = sc.label();
      r.gap = expected_value(eng, trie, vr) - base;
      local.push_back(std::move(r));
    }
    slots[static_cast<size_t>(idx)] = std::move(local);
  });

  std::vector<deviation_report> out;
  out.reserve(tasks.size() * scripts.size());
  for (auto& s : slots)
    for (auto& r : s) out.push_back(std::move(r));
  return out;
}

namespace {

escape_construction construct_in_frame(const expectation_engine& eng) {
  escape_construction c{eng.model(), false, 0, 0, 0, 0, {}, {}, 0, 0, 0};
  c.m_a = eng.myopic_threshold(player::a, belief_interval::at_least(0.0));
  c.m_b = eng.myopic_threshold(player::b, belief_interval::at_most(0.0));
  c.m_a_prime = eng.myopic_threshold(player::a, belief_interval::point(c.m_b));
  c.m_b_prime = eng.myopic_threshold(player::b, belief_interval::point(c.m_a));
  c.r_seq = {0.0};
  c.s_seq = {0.0};
  return c;
}

// The two truncation maps driving the escape recursion. Both are decreasing:
// widening the opponent window upward raises the conditional expectation and
// so lowers its root.
double truncation_threshold_a(const expectation_engine& eng, const escape_construction& c,
                              double s) {
  return eng.myopic_threshold(player::a, belief_interval::bounded(s, c.m_b));
}

double truncation_threshold_b(const expectation_engine& eng, const escape_construction& c,
                              double r) {
  return eng.myopic_threshold(player::b, belief_interval::bounded(c.m_a, r));
}

bool escape_sequence(const expectation_engine& eng, escape_construction& c, int iteration_cap) {
  if (!(c.m_a_prime < c.m_a)) return false;
  for (int k = 1; k <= iteration_cap; ++k) {
    const double s_prev = c.s_seq.back();
    const double r_prev = c.r_seq.back();
    if (!(s_prev <= c.m_b) || !(r_prev >= c.m_a)) return false;  // recursion left its domain
    const double r_k = truncation_threshold_a(eng, c, s_prev);
    const double s_k = truncation_threshold_b(eng, c, r_prev);
    if (!(s_k < c.m_b_prime + 1e-6))
      fail(errc::internal, "construct_escape: b's truncation map crossed its fixed point");
    c.r_seq.push_back(r_k);
    c.s_seq.push_back(s_k);
    if (r_k < c.m_a) {
      c.cap_k = k;
      // Past the escape, a's map must already sit below m_a for windows
      // anchored near b's fixed point.
      if (!(truncation_threshold_a(eng, c, c.m_b_prime) < c.m_a))
        fail(errc::internal, "construct_escape: a's truncation map fails to clear m_a");
      return true;
    }
  }
  return false;
}

void fill_probabilities(const expectation_engine& eng, escape_construction& c) {
  c.q = eng.type_probability(player::a, c.m_a, belief_interval::at_least(c.m_b));
  const double seg = eng.type_probability(player::a, c.m_a,
                                          belief_interval::bounded(c.m_b_prime, c.m_b));
  const double base = eng.type_probability(player::a, c.m_a,
                                           belief_interval::bounded(0.0, c.m_b));
  if (!(base > 0.0)) fail(errc::degenerate_support, "construct_escape: empty conditioning segment");
  c.q_prime = seg / base;
}

}  // namespace

escape_construction construct_escape(const expectation_engine& eng, int iteration_cap) {
  if (iteration_cap < 1) fail(errc::invalid_argument, "construct_escape: iteration cap must be >= 1");
  if (eng.model().symmetric())
    fail(errc::not_asymmetric, "construct_escape: model is symmetric");

  escape_construction direct = construct_in_frame(eng);
  if (std::fabs(eng.model().posterior_mean(direct.m_a, direct.m_b)) <= 1e-12)
    fail(errc::not_asymmetric,
         "construct_escape: split-date cutoff pair is payoff-indifferent");
  if (escape_sequence(eng, direct, iteration_cap)) {
    fill_probabilities(eng, direct);
    return direct;
  }

  // Mirror the roles and retry.
  const gaussian_model& m = eng.model();
  gaussian_model swapped(m.sigma0(), m.noise_sd(player::b), m.noise_sd(player::a));
  expectation_engine seng(swapped, eng.settings());
  escape_construction mirror = construct_in_frame(seng);
  mirror.reflected = true;
  if (escape_sequence(seng, mirror, iteration_cap)) {
    fill_probabilities(seng, mirror);
    return mirror;
  }
  fail(errc::non_termination, "construct_escape: no escape index under either role assignment");
}

static void check_frame(const expectation_engine& eng, const escape_construction& c,
                        const char* who) {
  const gaussian_model& m = eng.model();
  if (m.sigma0() != c.model.sigma0() || m.noise_sd(player::a) != c.model.noise_sd(player::a) ||
      m.noise_sd(player::b) != c.model.noise_sd(player::b))
    fail(errc::precondition, std::string(who) + ": engine model does not match construction frame");
}

deviation_report deviation_gain_bound(const expectation_engine& eng,
                                      const escape_construction& c, double delta, double epsilon,
                                      int horizon) {
  check_frame(eng, c, "deviation_gain_bound");
  if (!(delta > 0.0 && delta < 1.0))
    fail(errc::invalid_argument, "deviation_gain_bound: delta must lie in (0,1)");
  if (!(epsilon > 0.0)) fail(errc::invalid_argument, "deviation_gain_bound: epsilon must be positive");
  if (horizon <= c.cap_k)
    fail(errc::invalid_argument, "deviation_gain_bound: horizon must exceed the escape index");

  const double s_dev = c.m_a - epsilon;
  const double floor = std::max(c.m_a_prime, c.r_seq[static_cast<size_t>(c.cap_k)]);
  if (!(s_dev > floor))
    fail(errc::precondition, "deviation_gain_bound: deviating type sits below the escape floor");

  const double pi = -2.0 * eng.truncated_expectation(player::a, s_dev, belief_interval::at_least(0.0));
  const double q = eng.type_probability(player::a, s_dev, belief_interval::at_least(c.m_b));
  const double seg_mass =
      eng.type_probability(player::a, s_dev, belief_interval::bounded(c.m_b_prime, c.m_b));
  const double base_mass =
      eng.type_probability(player::a, s_dev, belief_interval::bounded(0.0, c.m_b));
  if (!(base_mass > 0.0))
    fail(errc::degenerate_support, "deviation_gain_bound: empty conditioning segment");
  const double q_prime = seg_mass / base_mass;

  const double seg_gain =
      2.0 * eng.truncated_expectation(player::a, s_dev, belief_interval::bounded(c.m_b_prime, c.m_b));
  double annuity = 0.0;
  double d = 1.0;
  for (int j = 0; j <= horizon - c.cap_k - 1; ++j) {
    annuity += d;
    d *= delta;
  }
  const double delta_gain = seg_gain * annuity;
  const double bound = -pi + std::pow(delta, c.cap_k) * q_prime * (1.0 - q) * delta_gain;

  deviation_report r;
  r.who = player::a;
  r.type_value = s_dev;
  r.script = "myopic+force(1,+1)";
  r.epsilon = epsilon;
  r.lower_bound = bound;
  r.pi = pi;
  r.delta_gain = delta_gain;
  r.q = q;
  r.q_prime = q_prime;
  r.cap_k = c.cap_k;
  return r;
}

std::optional<deviation_report> find_profitable_epsilon(const expectation_engine& eng,
                                                        const escape_construction& c, double delta,
                                                        int horizon, const epsilon_grid& grid) {
  if (!(grid.max > 0.0 && grid.min > 0.0 && grid.max >= grid.min && grid.ratio > 1.0))
    fail(errc::invalid_argument, "find_profitable_epsilon: malformed epsilon grid");
  double eps = grid.max;
  for (int guard = 0; guard < 200 && eps >= grid.min * (1.0 - 1e-12); ++guard, eps /= grid.ratio) {
    try {
      deviation_report r = deviation_gain_bound(eng, c, delta, eps, horizon);
      if (r.lower_bound > 0.0) return r;
    } catch (const error& e) {
      if (e.code() != errc::precondition) throw;  // epsilon too coarse for the floor; shrink and retry
    }
  }
  return std::nullopt;
}

double simulated_deviation_gain(const expectation_engine& eng, const escape_construction& c,
                                double delta, double epsilon, int horizon, belief_policy policy) {
  check_frame(eng, c, "simulated_deviation_gain");
  gap_request gr;
  gr.who = player::a;
  gr.s_own = c.m_a - epsilon;
  gr.deviation = strategy_spec::script(strategy_spec::myopic(), {{1, +1}});
  gr.baseline = strategy_spec::myopic();
  gr.opp = strategy_spec::myopic();
  gr.context = {{-1, +1}};
  gr.horizon = horizon;
  gr.delta = delta;
  gr.policy = policy;
  belief_trie trie = make_trie(eng, gr);
  return deviation_gap(eng, trie, gr);
}

aggregation_report aggregation_score(const expectation_engine& eng, const aggregation_request& req) {
  if (req.grid_n < 2) fail(errc::invalid_argument, "aggregation_score: grid_n must be >= 2");
  if (req.horizon < 1) fail(errc::invalid_argument, "aggregation_score: horizon must be >= 1");
  if (!(req.band >= 0.0)) fail(errc::invalid_argument, "aggregation_score: band must be >= 0");
  req.strat_a.validate();
  req.strat_b.validate();

  const gaussian_model& m = eng.model();
  const double span =
      req.span_sigmas * std::max(m.signal_sd(player::a), m.signal_sd(player::b));
  const double step = 2.0 * span / (req.grid_n - 1);

  belief_trie trie(eng, req.strat_a.presumed(), req.strat_b.presumed(), belief_policy::inertia);

  struct row_tally {
    int sampled = 0, excluded = 0, wrong = 0, unsettled = 0;
    std::vector<aggregation_report::point> points;
  };
  std::vector<row_tally> rows(static_cast<size_t>(req.grid_n));

  parallel_for(req.grid_n, req.workers, [&](int i) {
    row_tally tally;
    const double s_a = -span + step * i;
    for (int j = 0; j < req.grid_n; ++j) {
      const double s_b = -span + step * j;
      const double e = m.posterior_mean(s_a, s_b);
      const bool near_tie = m.symmetric() ? std::fabs(s_a + s_b) < req.band
                                          : std::fabs(e) < req.band * m.sigma0();
      if (near_tie) {
        tally.excluded += 1;
        continue;
      }
      tally.sampled += 1;
      const int truth = e > 0.0 ? +1 : -1;

      belief_trie::node* node = trie.root();
      int final_action = 0;
      bool settled = false;
      for (int t = 0; t < req.horizon; ++t) {
        const int z_a = action_of(req.strat_a, eng, player::a, s_a, *node);
        const int z_b = action_of(req.strat_b, eng, player::b, s_b, *node);
        belief_trie::node* kid = trie.child(node, {z_a, z_b});
        if (kid->s_a == node->s_a && kid->s_b == node->s_b && kid->mu_a == node->mu_a &&
            kid->mu_b == node->mu_b && req.strat_a.stationary_after(node->date + 1) &&
            req.strat_b.stationary_after(node->date + 1)) {
          settled = true;
          final_action = z_a == z_b ? z_a : 0;
          break;
        }
        node = kid;
      }
      if (!settled) {
        tally.unsettled += 1;
        tally.wrong += 1;
        tally.points.push_back({s_a, s_b, 0});
      } else if (final_action != truth) {
        tally.wrong += 1;
        tally.points.push_back({s_a, s_b, final_action});
      }
    }
    rows[static_cast<size_t>(i)] = std::move(tally);
  });

  aggregation_report rep;
  rep.profile = req.profile_label;
  rep.grid_n = req.grid_n;
  rep.span = span;
  for (const row_tally& t : rows) {
    rep.sampled += t.sampled;
    rep.excluded += t.excluded;
    rep.wrong += t.wrong;
    rep.unsettled += t.unsettled;
    rep.mismatch_points.insert(rep.mismatch_points.end(), t.points.begin(), t.points.end());
  }
  rep.mismatch_fraction = rep.sampled > 0 ? static_cast<double>(rep.wrong) / rep.sampled : 0.0;
  return rep;
}

dominance_report two_threshold_dominance_bound(const expectation_engine& eng, double delta,
                                               int points, double grid_max) {
  if (!(delta > 0.0 && delta < 1.0))
    fail(errc::invalid_argument, "two_threshold_dominance_bound: delta must lie in (0,1)");
  if (points < 2 || !(grid_max > 0.0))
    fail(errc::invalid_argument, "two_threshold_dominance_bound: malformed grid");

  dominance_report rep;
  rep.rows.reserve(static_cast<size_t>(points));
  const double step = grid_max / (points - 1);
  for (int k = 0; k < points; ++k) {
    dominance_row row;
    row.s = step * k;
    // Worst informational state an experiment can reveal: opponent types for
    // which the positive action is myopically wrong at s.
    const double t_star = eng.model().indifference_point(player::a, row.s);
    row.stage_loss = 2.0 * eng.marginal_expectation(player::a, row.s);
    const belief_interval low = belief_interval::at_most(t_star);
    const double pr = eng.type_probability(player::a, row.s, low);
    double value = 0.0;
    if (pr > eng.settings().quad.tail_mass_cutoff)
      value = std::fabs(eng.truncated_expectation(player::a, row.s, low));
    row.continuation_cap = 2.0 * delta / (1.0 - delta) * pr * value;
    row.dominated = row.stage_loss > row.continuation_cap;
    rep.rows.push_back(row);
  }
  for (size_t k = rep.rows.size(); k-- > 0;) {
    if (!rep.rows[k].dominated) break;
    rep.threshold = rep.rows[k].s;
  }
  return rep;
}

}  // namespace obslearn
