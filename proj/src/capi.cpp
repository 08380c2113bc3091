#include "obslearn/obslearn.h"

#include <cstring>
#include <string>

#include "core/belief.hpp"
#include "core/config.hpp"
#include "core/runner.hpp"
#include "core/serialize.hpp"

namespace {

thread_local std::string g_last_error;

struct model_handle {
  obslearn::gaussian_model model;
  obslearn::expectation_engine engine;
};

struct config_handle {
  obslearn::experiment_config cfg;
};

struct trace_handle {
  obslearn::myopic_trace trace;
};

obslearn_status map_error(obslearn::errc c) {
  using obslearn::errc;
  switch (c) {
    case errc::ok: return OBSLEARN_OK;
    case errc::invalid_argument: return OBSLEARN_ERR_INVALID_ARGUMENT;
    case errc::degenerate_support: return OBSLEARN_ERR_DEGENERATE_SUPPORT;
    case errc::no_sign_change: return OBSLEARN_ERR_NO_SIGN_CHANGE;
    case errc::off_path: return OBSLEARN_ERR_OFF_PATH;
    case errc::incomplete_strategy: return OBSLEARN_ERR_INCOMPLETE_STRATEGY;
    case errc::not_asymmetric: return OBSLEARN_ERR_NOT_ASYMMETRIC;
    case errc::non_termination: return OBSLEARN_ERR_NON_TERMINATION;
    case errc::precondition: return OBSLEARN_ERR_PRECONDITION;
    case errc::config: return OBSLEARN_ERR_CONFIG;
    case errc::io: return OBSLEARN_ERR_IO;
    case errc::unsupported: return OBSLEARN_ERR_UNSUPPORTED;
    case errc::internal: return OBSLEARN_ERR_INTERNAL;
  }
  return OBSLEARN_ERR_INTERNAL;
}

template <class F>
obslearn_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return OBSLEARN_OK;
  } catch (const obslearn::error& e) {
    g_last_error = e.what();
    return map_error(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return OBSLEARN_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return OBSLEARN_ERR_INTERNAL;
  }
}

obslearn_status bad_arg(const char* msg) {
  g_last_error = msg;
  return OBSLEARN_ERR_INVALID_ARGUMENT;
}

obslearn::player to_player(int p) {
  if (p != 0 && p != 1) obslearn::fail(obslearn::errc::invalid_argument, "player must be 0 (a) or 1 (b)");
  return p == 0 ? obslearn::player::a : obslearn::player::b;
}

obslearn::belief_interval to_interval(double lo, double hi) {
  obslearn::belief_interval iv{lo, hi};
  if (!iv.valid()) obslearn::fail(obslearn::errc::invalid_argument, "interval endpoints out of order or nan");
  return iv;
}

obslearn_status run_wrapped(const obslearn_config* c, int* outcome,
                            obslearn::run_result (*fn)(const obslearn::experiment_config&)) {
  if (!c || !outcome) return bad_arg("null handle or outcome pointer");
  return guarded([&] {
    const obslearn::run_result r = fn(reinterpret_cast<const config_handle*>(c)->cfg);
    *outcome = static_cast<int>(r.outcome);
  });
}

}  // namespace

extern "C" {

const char* obslearn_version(void) { return "0.1.0"; }

const char* obslearn_last_error(void) { return g_last_error.c_str(); }

obslearn_status obslearn_model_create(double sigma0, double sigma_a, double sigma_b,
                                      obslearn_model** out) {
  obslearn::engine_settings defaults;
  return obslearn_model_create_with(sigma0, sigma_a, sigma_b, defaults.quad.abs_tol,
                                    defaults.quad.rel_tol, defaults.quad.max_subdivisions,
                                    defaults.quad.tail_mass_cutoff, defaults.root_tol, out);
}

obslearn_status obslearn_model_create_with(double sigma0, double sigma_a, double sigma_b,
                                           double quad_abs_tol, double quad_rel_tol,
                                           int quad_max_subdivisions, double tail_mass_cutoff,
                                           double root_tol, obslearn_model** out) {
  if (!out) return bad_arg("out must not be null");
  *out = nullptr;
  return guarded([&] {
    obslearn::engine_settings st;
    st.quad.abs_tol = quad_abs_tol;
    st.quad.rel_tol = quad_rel_tol;
    st.quad.max_subdivisions = quad_max_subdivisions;
    st.quad.tail_mass_cutoff = tail_mass_cutoff;
    st.root_tol = root_tol;
    obslearn::gaussian_model m(sigma0, sigma_a, sigma_b);
    *out = reinterpret_cast<obslearn_model*>(new model_handle{m, obslearn::expectation_engine(m, st)});
  });
}

void obslearn_model_destroy(obslearn_model* m) { delete reinterpret_cast<model_handle*>(m); }

obslearn_status obslearn_posterior_mean(const obslearn_model* m, double s_a, double s_b,
                                        double* out) {
  if (!m || !out) return bad_arg("null handle or out pointer");
  return guarded([&] {
    *out = reinterpret_cast<const model_handle*>(m)->model.posterior_mean(s_a, s_b);
  });
}

obslearn_status obslearn_marginal_expectation(const obslearn_model* m, int player, double s_own,
                                              double* out) {
  if (!m || !out) return bad_arg("null handle or out pointer");
  return guarded([&] {
    *out = reinterpret_cast<const model_handle*>(m)->engine.marginal_expectation(to_player(player),
                                                                                 s_own);
  });
}

obslearn_status obslearn_truncated_expectation(const obslearn_model* m, int player, double s_own,
                                               double lo, double hi, double* out) {
  if (!m || !out) return bad_arg("null handle or out pointer");
  return guarded([&] {
    *out = reinterpret_cast<const model_handle*>(m)->engine.truncated_expectation(
        to_player(player), s_own, to_interval(lo, hi));
  });
}

obslearn_status obslearn_conditional_type_density(const obslearn_model* m, int player,
                                                  double s_own, double t, double lo, double hi,
                                                  double* out) {
  if (!m || !out) return bad_arg("null handle or out pointer");
  return guarded([&] {
    *out = reinterpret_cast<const model_handle*>(m)->engine.conditional_type_density(
        to_player(player), s_own, t, to_interval(lo, hi));
  });
}

obslearn_status obslearn_type_probability(const obslearn_model* m, int player, double s_own,
                                          double lo, double hi, double* out) {
  if (!m || !out) return bad_arg("null handle or out pointer");
  return guarded([&] {
    *out = reinterpret_cast<const model_handle*>(m)->engine.type_probability(to_player(player),
                                                                             s_own,
                                                                             to_interval(lo, hi));
  });
}

obslearn_status obslearn_myopic_threshold(const obslearn_model* m, int player, double lo,
                                          double hi, double* out) {
  if (!m || !out) return bad_arg("null handle or out pointer");
  return guarded([&] {
    *out = reinterpret_cast<const model_handle*>(m)->engine.myopic_threshold(to_player(player),
                                                                             to_interval(lo, hi));
  });
}

obslearn_status obslearn_dominant_action(const obslearn_model* m, int player, double s_own,
                                         double lo, double hi, int* action) {
  if (!m || !action) return bad_arg("null handle or out pointer");
  return guarded([&] {
    auto r = reinterpret_cast<const model_handle*>(m)->engine.dominant_action(to_player(player),
                                                                              s_own,
                                                                              to_interval(lo, hi));
    *action = r.value_or(0);
  });
}

obslearn_status obslearn_evolve_myopic(const obslearn_model* m, double s_a, double s_b,
                                       int horizon, obslearn_trace** out) {
  if (!m || !out) return bad_arg("null handle or out pointer");
  *out = nullptr;
  return guarded([&] {
    auto* h = reinterpret_cast<const model_handle*>(m);
    *out = reinterpret_cast<obslearn_trace*>(
        new trace_handle{obslearn::evolve_myopic(h->engine, s_a, s_b, horizon)});
  });
}

int obslearn_trace_length(const obslearn_trace* t) {
  if (!t) return 0;
  return static_cast<int>(reinterpret_cast<const trace_handle*>(t)->trace.rows.size());
}

int obslearn_trace_first_agreement(const obslearn_trace* t) {
  if (!t) return -1;
  return reinterpret_cast<const trace_handle*>(t)->trace.first_agreement;
}

obslearn_status obslearn_trace_row_at(const obslearn_trace* t, int index, obslearn_trace_row* out) {
  if (!t || !out) return bad_arg("null handle or out pointer");
  const auto& rows = reinterpret_cast<const trace_handle*>(t)->trace.rows;
  if (index < 0 || static_cast<size_t>(index) >= rows.size()) return bad_arg("row index out of range");
  const obslearn::myopic_row& r = rows[static_cast<size_t>(index)];
  out->date = r.date;
  out->z_a = r.z_a;
  out->z_b = r.z_b;
  out->s_a_lo = r.s_a.lo;
  out->s_a_hi = r.s_a.hi;
  out->s_b_lo = r.s_b.lo;
  out->s_b_hi = r.s_b.hi;
  out->m_a = r.m_a;
  out->m_b = r.m_b;
  out->agreed = r.agreed ? 1 : 0;
  return OBSLEARN_OK;
}

obslearn_status obslearn_trace_write_csv(const obslearn_trace* t, const obslearn_model* m,
                                         const char* path) {
  if (!t || !m || !path) return bad_arg("null handle or path");
  return guarded([&] {
    obslearn::write_text_file(path,
                              obslearn::myopic_trace_csv(
                                  reinterpret_cast<const trace_handle*>(t)->trace,
                                  reinterpret_cast<const model_handle*>(m)->model));
  });
}

obslearn_status obslearn_trace_write_json(const obslearn_trace* t, const obslearn_model* m,
                                          double s_a, double s_b, const char* path) {
  if (!t || !m || !path) return bad_arg("null handle or path");
  return guarded([&] {
    obslearn::write_text_file(path,
                              obslearn::myopic_trace_json(
                                  reinterpret_cast<const trace_handle*>(t)->trace,
                                  reinterpret_cast<const model_handle*>(m)->model, s_a, s_b));
  });
}

void obslearn_trace_destroy(obslearn_trace* t) { delete reinterpret_cast<trace_handle*>(t); }

obslearn_status obslearn_config_default(obslearn_config** out) {
  if (!out) return bad_arg("out must not be null");
  *out = nullptr;
  return guarded([&] { *out = reinterpret_cast<obslearn_config*>(new config_handle{}); });
}

obslearn_status obslearn_config_load(const char* path, obslearn_config** out) {
  if (!path || !out) return bad_arg("null path or out pointer");
  *out = nullptr;
  return guarded([&] {
    *out = reinterpret_cast<obslearn_config*>(
        new config_handle{obslearn::experiment_config::load(path)});
  });
}

obslearn_status obslearn_config_set_output_dir(obslearn_config* c, const char* dir) {
  if (!c || !dir) return bad_arg("null handle or dir");
  return guarded([&] {
    auto& cfg = reinterpret_cast<config_handle*>(c)->cfg;
    cfg.output_dir = dir;
    cfg.validate();
  });
}

obslearn_status obslearn_config_set_seed(obslearn_config* c, unsigned long long seed) {
  if (!c) return bad_arg("null handle");
  reinterpret_cast<config_handle*>(c)->cfg.seed = seed;
  return OBSLEARN_OK;
}

obslearn_status obslearn_config_set_workers(obslearn_config* c, int workers) {
  if (!c) return bad_arg("null handle");
  return guarded([&] {
    auto& cfg = reinterpret_cast<config_handle*>(c)->cfg;
    cfg.workers = workers;
    cfg.validate();
  });
}

obslearn_status obslearn_config_set_verbose(obslearn_config* c, int verbose) {
  if (!c) return bad_arg("null handle");
  reinterpret_cast<config_handle*>(c)->cfg.verbose = verbose != 0;
  return OBSLEARN_OK;
}

obslearn_status obslearn_config_hash(const obslearn_config* c, char* buf, size_t buflen) {
  if (!c || !buf) return bad_arg("null handle or buffer");
  if (buflen < 17) return bad_arg("hash buffer must hold at least 17 bytes");
  return guarded([&] {
    const std::string h = reinterpret_cast<const config_handle*>(c)->cfg.hash();
    std::memcpy(buf, h.c_str(), h.size() + 1);
  });
}

void obslearn_config_destroy(obslearn_config* c) { delete reinterpret_cast<config_handle*>(c); }

obslearn_status obslearn_run_simulate(const obslearn_config* c, double s_a, double s_b,
                                      int* outcome) {
  if (!c || !outcome) return bad_arg("null handle or outcome pointer");
  return guarded([&] {
    const obslearn::run_result r =
        obslearn::run_simulate(reinterpret_cast<const config_handle*>(c)->cfg, s_a, s_b);
    *outcome = static_cast<int>(r.outcome);
  });
}

obslearn_status obslearn_run_check(const obslearn_config* c, int* outcome) {
  return run_wrapped(c, outcome, obslearn::run_check);
}

obslearn_status obslearn_run_aggregate(const obslearn_config* c, int* outcome) {
  return run_wrapped(c, outcome, obslearn::run_aggregate);
}

obslearn_status obslearn_run_construct(const obslearn_config* c, int* outcome) {
  return run_wrapped(c, outcome, obslearn::run_construct);
}

obslearn_status obslearn_run_oracle(const obslearn_config* c, int* outcome) {
  return run_wrapped(c, outcome, obslearn::run_oracle);
}

}  // extern "C"
