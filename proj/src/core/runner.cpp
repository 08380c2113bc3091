#include "core/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>

#include "core/rng.hpp"
#include "core/serialize.hpp"
#include "core/value.hpp"

namespace obslearn {

namespace {

constexpr const char* kVersion = "0.1.0";
// Gap tolerance for declaring the myopic profile deviation-proof, and for
// comparing measured deviation gains against their analytic lower bound.
constexpr double kGapTolerance = 1e-7;

class run_context {
public:
  run_context(const experiment_config& cfg, const char* command) : cfg_(cfg), command_(command) {
    cfg_.validate();
    dir_ = std::filesystem::path(cfg_.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) fail(errc::io, "cannot create output directory: " + cfg_.output_dir);
    start_ = std::chrono::steady_clock::now();
    last_mark_ = start_;
  }

  void emit(const std::string& name, const std::string& content) {
    write_text_file((dir_ / name).string(), content);
    outputs_.push_back(name);
  }

  void mark(const std::string& phase) {
    const auto now = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(now - last_mark_).count();
    timings_.emplace_back(phase, ms);
    last_mark_ = now;
  }

  run_result finish(run_outcome outcome) {
    const auto now = std::chrono::steady_clock::now();
    const double total_ms = std::chrono::duration<double, std::milli>(now - start_).count();
    json_writer w;
    w.begin_object();
    w.kv("kind", "run_manifest");
    w.kv("version", kVersion);
    w.kv("command", command_);
    w.kv("config_hash", cfg_.hash());
    w.kv("outcome", static_cast<int>(outcome));
    w.key("outputs");
    w.begin_array();
    for (const std::string& o : outputs_) w.value(o);
    w.value("manifest.json");
    w.end_array();
    w.key("timings_ms");
    w.begin_object();
    for (const auto& [phase, ms] : timings_) w.kv(phase, ms);
    w.kv("total", total_ms);
    w.end_object();
    w.end_object();
    emit("manifest.json", w.str());
    outputs_.pop_back();  // manifest listed explicitly above
    run_result res;
    res.outcome = outcome;
    res.outputs = outputs_;
    res.outputs.push_back("manifest.json");
    return res;
  }

  const experiment_config& cfg() const { return cfg_; }

private:
  experiment_config cfg_;
  std::string command_;
  std::filesystem::path dir_;
  std::vector<std::string> outputs_;
  std::vector<std::pair<std::string, double>> timings_;
  std::chrono::steady_clock::time_point start_, last_mark_;
};

void model_json(json_writer& w, const gaussian_model& m) {
  w.begin_object();
  w.kv("sigma0", m.sigma0());
  w.kv("sigma_a", m.noise_sd(player::a));
  w.kv("sigma_b", m.noise_sd(player::b));
  w.end_object();
}

void construction_json_body(json_writer& w, const escape_construction& c) {
  w.begin_object();
  w.key("model");
  model_json(w, c.model);
  w.kv("reflected", c.reflected);
  w.kv("m_a", c.m_a);
  w.kv("m_b", c.m_b);
  w.kv("m_a_prime", c.m_a_prime);
  w.kv("m_b_prime", c.m_b_prime);
  w.kv("escape_index", c.cap_k);
  w.kv("q", c.q);
  w.kv("q_prime", c.q_prime);
  w.key("r_seq");
  w.begin_array();
  for (double r : c.r_seq) w.value(r);
  w.end_array();
  w.key("s_seq");
  w.begin_array();
  for (double s : c.s_seq) w.value(s);
  w.end_array();
  w.end_object();
}

}  // namespace

run_result run_simulate(const experiment_config& cfg, double s_a, double s_b) {
  run_context ctx(cfg, "simulate");
  gaussian_model model = cfg.make_model();
  expectation_engine eng(model, cfg.make_engine_settings());
  myopic_trace tr = evolve_myopic(eng, s_a, s_b, cfg.horizon);
  ctx.mark("evolve");
  ctx.emit("trace.csv", myopic_trace_csv(tr, model));
  ctx.emit("trace.json", myopic_trace_json(tr, model, s_a, s_b));
  ctx.mark("serialize");
  return ctx.finish(tr.first_agreement >= 0 ? run_outcome::consistent : run_outcome::inconclusive);
}

run_result run_check(const experiment_config& cfg) {
  run_context ctx(cfg, "check");
  gaussian_model model = cfg.make_model();
  expectation_engine eng(model, cfg.make_engine_settings());

  if (model.symmetric()) {
    const std::vector<double> grid = default_type_grid(
        eng, player::a, cfg.type_points, cfg.type_span_sigmas, cfg.threshold_exclusion);
    sweep_request sr;
    sr.delta_a = cfg.delta_a;
    sr.delta_b = cfg.delta_b;
    sr.horizon = cfg.horizon;
    sr.policy = cfg.policy;
    sr.type_grid = grid;
    sr.workers = cfg.workers;
    const std::vector<deviation_report> reports = check_symmetric_equilibrium(eng, sr);
    ctx.mark("sweep");

    double max_gap = -std::numeric_limits<double>::infinity();
    for (const deviation_report& r : reports) max_gap = std::max(max_gap, r.gap);
    const run_outcome oc =
        max_gap <= kGapTolerance ? run_outcome::consistent : run_outcome::inconsistent;

    json_writer w;
    w.begin_object();
    w.kv("kind", "check_report");
    w.kv("mode", "symmetric_equilibrium");
    w.kv("config_hash", cfg.hash());
    w.key("model");
    model_json(w, model);
    w.key("discount");
    w.begin_object();
    w.kv("delta_a", cfg.delta_a);
    w.kv("delta_b", cfg.delta_b);
    w.end_object();
    w.kv("horizon", cfg.horizon);
    w.kv("belief_policy", policy_name(cfg.policy));
    w.kv("gap_tolerance", kGapTolerance);
    w.key("type_grid");
    w.begin_array();
    for (double s : grid) w.value(s);
    w.end_array();
    w.kv("max_gap", max_gap);
    w.kv("deviation_profitable", !(max_gap <= kGapTolerance));
    w.key("reports");
    w.begin_array();
    for (const deviation_report& r : reports) {
      w.begin_object();
      w.kv("player", player_name(r.who));
      w.kv("type", r.type_value);
      w.kv("script", r.script);
      w.kv("gap", r.gap);
      w.end_object();
    }
    w.end_array();
    w.end_object();
    ctx.emit("check_report.json", w.str());
    ctx.emit("check_report.csv", deviation_reports_csv(reports));
    ctx.mark("serialize");
    return ctx.finish(oc);
  }

  // Asymmetric: build the escape construction, find a bound-positive epsilon,
  // then measure the realized gain of the same deviation.
  const escape_construction c = construct_escape(eng, cfg.construction_cap);
  ctx.mark("construct");
  expectation_engine frame_eng(c.model, cfg.make_engine_settings());
  const expectation_engine& feng = c.reflected ? frame_eng : eng;
  const double delta = c.reflected ? cfg.delta_b : cfg.delta_a;
  const int horizon = c.cap_k + 5;
  const epsilon_grid grid{cfg.epsilon_max, cfg.epsilon_min, cfg.epsilon_ratio};

  std::optional<deviation_report> found = find_profitable_epsilon(feng, c, delta, horizon, grid);
  ctx.mark("search");
  double gap = std::numeric_limits<double>::quiet_NaN();
  bool bound_respected = false;
  run_outcome oc = run_outcome::inconclusive;
  if (found) {
    gap = simulated_deviation_gain(feng, c, delta, found->epsilon, horizon, cfg.policy);
    bound_respected = gap >= found->lower_bound - kGapTolerance;
    oc = gap > 0.0 ? run_outcome::consistent : run_outcome::inconsistent;
  }
  ctx.mark("simulate");

  json_writer w;
  w.begin_object();
  w.kv("kind", "check_report");
  w.kv("mode", "asymmetric_deviation");
  w.kv("config_hash", cfg.hash());
  w.key("model");
  model_json(w, model);
  w.kv("delta", delta);
  w.kv("horizon", horizon);
  w.kv("belief_policy", policy_name(cfg.policy));
  w.kv("gap_tolerance", kGapTolerance);
  w.key("construction");
  construction_json_body(w, c);
  w.key("search");
  if (found) {
    w.begin_object();
    w.kv("epsilon", found->epsilon);
    w.kv("deviating_type", found->type_value);
    w.kv("script", found->script);
    w.kv("lower_bound", found->lower_bound);
    w.kv("pi", found->pi);
    w.kv("delta_gain", found->delta_gain);
    w.kv("q", found->q);
    w.kv("q_prime", found->q_prime);
    w.end_object();
  } else {
    w.null();
  }
  w.kv("simulated_gap", gap);
  w.kv("deviation_profitable", found.has_value() && gap > 0.0);
  w.kv("bound_respected", bound_respected);
  w.end_object();
  ctx.emit("check_report.json", w.str());
  ctx.emit("check_report.csv", construction_csv(c));
  ctx.mark("serialize");
  return ctx.finish(oc);
}

namespace {

std::string factor_tag(double f) {
  std::string t = fmt17(f);
  // File-name friendly: 0.5 -> 0p5
  for (char& ch : t)
    if (ch == '.') ch = 'p';
  return t;
}

void aggregation_json(run_context& ctx, const std::string& name, const aggregation_report& rep,
                      const experiment_config& cfg) {
  json_writer w;
  w.begin_object();
  w.kv("kind", "aggregation_report");
  w.kv("config_hash", cfg.hash());
  w.kv("profile", rep.profile);
  w.kv("grid_n", rep.grid_n);
  w.kv("span", rep.span);
  w.kv("band", cfg.indifference_band);
  w.kv("horizon", cfg.horizon);
  w.kv("sampled", rep.sampled);
  w.kv("excluded", rep.excluded);
  w.kv("wrong", rep.wrong);
  w.kv("unsettled", rep.unsettled);
  w.kv("mismatch_fraction", rep.mismatch_fraction);
  w.end_object();
  ctx.emit(name, w.str());
}

}  // namespace

run_result run_aggregate(const experiment_config& cfg) {
  run_context ctx(cfg, "aggregate");
  gaussian_model model = cfg.make_model();
  expectation_engine eng(model, cfg.make_engine_settings());

  aggregation_request base;
  base.strat_a = strategy_spec::myopic();
  base.strat_b = strategy_spec::myopic();
  base.profile_label = "myopic";
  base.grid_n = cfg.aggregation_points;
  base.span_sigmas = cfg.aggregation_span_sigmas;
  base.band = cfg.indifference_band;
  base.horizon = cfg.horizon;
  base.workers = cfg.workers;

  const aggregation_report myopic_rep = aggregation_score(eng, base);
  ctx.mark("myopic");
  aggregation_json(ctx, "aggregation_myopic.json", myopic_rep, cfg);
  ctx.emit("aggregation_myopic.csv", aggregation_csv(myopic_rep));
  ctx.emit("mismatch_points_myopic.csv", mismatch_points_csv(myopic_rep));

  // Non-myopic comparison profiles: player a rescales its cutoff once, at the
  // history where a opened negative against b's positive.
  const history split{{-1, +1}};
  bool all_scaled_miss = true;
  for (double f : cfg.scale_factors) {
    aggregation_request req = base;
    req.strat_a = strategy_spec::scaled(split, f);
    req.profile_label = "scaled_" + factor_tag(f);
    const aggregation_report rep = aggregation_score(eng, req);
    ctx.mark(req.profile_label);
    aggregation_json(ctx, "aggregation_" + req.profile_label + ".json", rep, cfg);
    ctx.emit("aggregation_" + req.profile_label + ".csv", aggregation_csv(rep));
    ctx.emit("mismatch_points_" + req.profile_label + ".csv", mismatch_points_csv(rep));
    if (rep.wrong == 0) all_scaled_miss = false;
  }

  const run_outcome oc = myopic_rep.wrong == 0 && all_scaled_miss ? run_outcome::consistent
                                                                  : run_outcome::inconsistent;
  return ctx.finish(oc);
}

run_result run_construct(const experiment_config& cfg) {
  run_context ctx(cfg, "construct");
  gaussian_model model = cfg.make_model();
  expectation_engine eng(model, cfg.make_engine_settings());
  const escape_construction c = construct_escape(eng, cfg.construction_cap);
  ctx.mark("construct");

  json_writer w;
  w.begin_object();
  w.kv("kind", "construction_report");
  w.kv("config_hash", cfg.hash());
  w.key("construction");
  construction_json_body(w, c);
  w.end_object();
  ctx.emit("construction.json", w.str());
  ctx.emit("construction.csv", construction_csv(c));
  ctx.mark("serialize");
  return ctx.finish(c.cap_k >= 2 ? run_outcome::consistent : run_outcome::inconsistent);
}

namespace {

struct oracle_row {
  std::string name;
  double exact = 0.0, estimate = 0.0, se = 0.0, zscore = 0.0;
  bool pass = false;
};

oracle_row make_row(const std::string& name, double exact, double estimate, double se) {
  oracle_row r;
  r.name = name;
  r.exact = exact;
  r.estimate = estimate;
  r.se = se;
  r.zscore = se > 0.0 ? (estimate - exact) / se : (estimate == exact ? 0.0 : INFINITY);
  r.pass = std::fabs(r.zscore) <= 4.0;
  return r;
}

}  // namespace

// Monte Carlo cross-checks built from the primitive state/noise densities
// only, so closed forms and quadrature are validated against sampling.
run_result run_oracle(const experiment_config& cfg) {
  run_context ctx(cfg, "oracle");
  gaussian_model model = cfg.make_model();
  expectation_engine eng(model, cfg.make_engine_settings());
  deterministic_rng rng(cfg.seed);
  const int n = cfg.mc_samples;

  std::vector<oracle_row> rows;

  // x | s_a is Normal with moments assembled from prior/noise variances only.
  const double s0sq = model.sigma0() * model.sigma0();
  const double sasq = model.noise_sd(player::a) * model.noise_sd(player::a);
  const double post_mean_coef = s0sq / (s0sq + sasq);
  const double post_sd = std::sqrt(s0sq * sasq / (s0sq + sasq));

  {
    const double s_a = 0.4;
    const belief_interval S{0.3, 1.7};
    int hits = 0;
    double sum_x = 0.0, sum_x2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = rng.normal(post_mean_coef * s_a, post_sd);
      const double s_b = x + rng.normal(0.0, model.noise_sd(player::b));
      if (S.contains(s_b)) {
        hits += 1;
        sum_x += x;
        sum_x2 += x * x;
      }
    }
    const double p_hat = static_cast<double>(hits) / n;
    rows.push_back(make_row("type_probability[0.3,1.7]", eng.type_probability(player::a, s_a, S),
                            p_hat, std::sqrt(p_hat * (1.0 - p_hat) / n)));
    if (hits > 1) {
      const double mean = sum_x / hits;
      const double var = std::max(0.0, sum_x2 / hits - mean * mean);
      rows.push_back(make_row("truncated_expectation[0.3,1.7]",
                              eng.truncated_expectation(player::a, s_a, S), mean,
                              std::sqrt(var / hits)));
    }
  }

  {
    const double s_a = -0.3;
    const belief_interval S = belief_interval::at_least(0.2);
    int hits = 0;
    double sum_x = 0.0, sum_x2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = rng.normal(post_mean_coef * s_a, post_sd);
      const double s_b = x + rng.normal(0.0, model.noise_sd(player::b));
      if (S.contains(s_b)) {
        hits += 1;
        sum_x += x;
        sum_x2 += x * x;
      }
    }
    if (hits > 1) {
      const double mean = sum_x / hits;
      const double var = std::max(0.0, sum_x2 / hits - mean * mean);
      rows.push_back(make_row("truncated_expectation[0.2,inf)",
                              eng.truncated_expectation(player::a, s_a, S), mean,
                              std::sqrt(var / hits)));
    }
  }

  {
    // Self-normalized importance estimate of the two-signal posterior mean.
    const double s_a = 0.7, s_b = -0.2;
    double sw = 0.0, swx = 0.0, sw2 = 0.0, swx2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = rng.normal(post_mean_coef * s_a, post_sd);
      const double w = model.signal_density(player::b, s_b, x);
      sw += w;
      swx += w * x;
      sw2 += w * w;
      swx2 += w * x * w * x;
    }
    const double est = swx / sw;
    // Delta-method standard error of the ratio estimator.
    const double mw = sw / n, mwx = swx / n;
    const double vw = std::max(0.0, sw2 / n - mw * mw);
    const double vwx = std::max(0.0, swx2 / n - mwx * mwx);
    const double se = std::sqrt(std::max(1e-300, vwx / (mw * mw) + vw * mwx * mwx / (mw * mw * mw * mw))) /
                      std::sqrt(static_cast<double>(n));
    rows.push_back(make_row("posterior_mean(0.7,-0.2)", model.posterior_mean(s_a, s_b), est, se));
  }

  ctx.mark("density_checks");

  {
    // Discounted-value estimate: simulate myopic play against sampled
    // opponent types and average the realized discounted payoffs.
    const double s_own = 0.7;
    const int horizon = 10;
    const double delta = cfg.delta_a;
    value_request vr;
    vr.who = player::a;
    vr.s_own = s_own;
    vr.own = strategy_spec::myopic();
    vr.opp = strategy_spec::myopic();
    vr.horizon = horizon;
    vr.delta = delta;
    vr.policy = cfg.policy;
    belief_trie trie(eng, strategy_spec::myopic(), strategy_spec::myopic(), cfg.policy);
    const double exact = expected_value(eng, trie, vr);

    const int n_ev = std::min(n, 200000);
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n_ev; ++i) {
      const double x = rng.normal(post_mean_coef * s_own, post_sd);
      const double s_b = x + rng.normal(0.0, model.noise_sd(player::b));
      belief_trie::node* node = trie.root();
      double value = 0.0, disc = 1.0;
      for (int t = 0; t < horizon; ++t) {
        const int z_a = s_own >= node->mu_a ? +1 : -1;
        const int z_b = s_b >= node->mu_b ? +1 : -1;
        value += disc * z_a * model.posterior_mean(s_own, s_b);
        disc *= delta;
        node = trie.child(node, {z_a, z_b});
      }
      sum += value;
      sum2 += value * value;
    }
    const double mean = sum / n_ev;
    const double var = std::max(0.0, sum2 / n_ev - mean * mean);
    rows.push_back(make_row("expected_value(myopic,h=10)", exact, mean, std::sqrt(var / n_ev)));
  }
  ctx.mark("value_check");

  bool all_pass = true;
  json_writer w;
  w.begin_object();
  w.kv("kind", "oracle_report");
  w.kv("config_hash", cfg.hash());
  w.kv("samples", n);
  w.key("checks");
  w.begin_array();
  for (const oracle_row& r : rows) {
    all_pass = all_pass && r.pass;
    w.begin_object();
    w.kv("name", r.name);
    w.kv("exact", r.exact);
    w.kv("estimate", r.estimate);
    w.kv("se", r.se);
    w.kv("zscore", r.zscore);
    w.kv("pass", r.pass);
    w.end_object();
  }
  w.end_array();
  w.kv("all_pass", all_pass);
  w.end_object();
  ctx.emit("oracle_report.json", w.str());
  ctx.mark("serialize");
  return ctx.finish(all_pass ? run_outcome::consistent : run_outcome::inconsistent);
}

}  // namespace obslearn
