#include "core/expectation.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <shared_mutex>

#include "core/normal.hpp"

namespace obslearn {

expectation_engine::expectation_engine(const gaussian_model& model, const engine_settings& settings)
    : model_(model), settings_(settings) {
  settings_.validate();
  tail_z_ = normal_quantile(1.0 - settings_.quad.tail_mass_cutoff);
}

static void check_signal(double s, const char* who) {
  if (std::isnan(s) || !std::isfinite(s)) fail(errc::invalid_argument, std::string(who) + ": signal must be finite");
}

static void check_interval(const belief_interval& S, const char* who) {
  if (!S.valid()) fail(errc::invalid_argument, std::string(who) + ": invalid interval");
}

double expectation_engine::raw_mass(player observer, double s_own, const belief_interval& S) const {
  const double mean = model_.cond_mean_coef(observer) * s_own;
  const double sd = model_.cond_sd(observer);
  const double ph = S.bounded_above() ? normal_cdf((S.hi - mean) / sd) : 1.0;
  const double pl = S.bounded_below() ? normal_cdf((S.lo - mean) / sd) : 0.0;
  return ph - pl;
}

intersect_result expectation_engine::effective_window(player observer, double s_own,
                                                      const belief_interval& S) const {
  const double mean = model_.cond_mean_coef(observer) * s_own;
  const double sd = model_.cond_sd(observer);
  belief_interval window{mean - tail_z_ * sd, mean + tail_z_ * sd};
  return intersect(S, window);
}

double expectation_engine::conditional_type_density(player observer, double s_own, double t,
                                                    const belief_interval& S) const {
  check_signal(s_own, "conditional_type_density");
  check_interval(S, "conditional_type_density");
  const double mass = raw_mass(observer, s_own, S);
  if (!(mass >= settings_.quad.tail_mass_cutoff))
    fail(errc::degenerate_support, "conditional_type_density: interval carries negligible mass");
  if (t < S.lo || t > S.hi) return 0.0;
  const double mean = model_.cond_mean_coef(observer) * s_own;
  const double sd = model_.cond_sd(observer);
  return normal_pdf((t - mean) / sd) / sd / mass;
}

double expectation_engine::window_mean_unchecked(player observer, double s_own,
                                                 const belief_interval& S) const {
  if (S.singleton()) return model_.posterior_mean_as(observer, s_own, S.lo);
  const double mean = model_.cond_mean_coef(observer) * s_own;
  const double sd = model_.cond_sd(observer);
  const double mass = raw_mass(observer, s_own, S);
  const intersect_result win = effective_window(observer, s_own, S);
  if (mass >= settings_.quad.tail_mass_cutoff && win.ok && win.value.lo < win.value.hi) {
    auto density = [&](double t) { return normal_pdf((t - mean) / sd); };
    auto weighted = [&](double t) {
      return model_.posterior_mean_as(observer, s_own, t) * density(t);
    };
    const double num = integrate(weighted, win.value.lo, win.value.hi, settings_.quad);
    const double den = integrate(density, win.value.lo, win.value.hi, settings_.quad);
    if (den > 0.0) return num / den;
  }
  // S sits so deep in the conditional tail that its mass underflows. The
  // truncated law then concentrates at the point of S nearest the conditional
  // mean, where the pairwise closed form applies. A negligible window is
  // always bounded on the side facing the mean, so the clamp is finite.
  return model_.posterior_mean_as(observer, s_own, std::clamp(mean, S.lo, S.hi));
}

double expectation_engine::truncated_expectation(player observer, double s_own,
                                                 const belief_interval& S) const {
  check_signal(s_own, "truncated_expectation");
  check_interval(S, "truncated_expectation");
  if (S.singleton()) return model_.posterior_mean_as(observer, s_own, S.lo);

  const double mass = raw_mass(observer, s_own, S);
  if (!(mass >= settings_.quad.tail_mass_cutoff))
    fail(errc::degenerate_support, "truncated_expectation: interval carries negligible mass");
  const intersect_result win = effective_window(observer, s_own, S);
  if (!win.ok || win.value.lo >= win.value.hi)
    fail(errc::degenerate_support, "truncated_expectation: interval carries negligible mass");
  return window_mean_unchecked(observer, s_own, S);
}

double expectation_engine::marginal_expectation(player observer, double s_own) const {
  check_signal(s_own, "marginal_expectation");
  return model_.marginal_state_mean(observer, s_own);
}

double expectation_engine::type_probability(player observer, double s_own,
                                            const belief_interval& S) const {
  check_signal(s_own, "type_probability");
  check_interval(S, "type_probability");
  const double mass = raw_mass(observer, s_own, S);
  return std::clamp(mass, 0.0, 1.0);
}

double expectation_engine::myopic_threshold(player i, const belief_interval& S_other) const {
  check_interval(S_other, "myopic_threshold");
  const auto key = std::make_tuple(static_cast<int>(i), S_other.lo, S_other.hi);
  {
    std::shared_lock lock(cache_mutex_);
    auto it = threshold_cache_.find(key);
    if (it != threshold_cache_.end()) return it->second;
  }

  double root;
  if (S_other.singleton()) {
    root = model_.indifference_point(i, S_other.lo);
  } else {
    auto residual = [&](double m) { return window_mean_unchecked(i, m, S_other); };
    const double span = 4.0 * (model_.sigma0() + model_.noise_sd(player::a) + model_.noise_sd(player::b));
    double lo = -span, hi = span;
    double flo = residual(lo), fhi = residual(hi);
    int expansions = 0;
    while (flo > 0.0 || fhi < 0.0) {
      if (++expansions > 60) fail(errc::no_sign_change, "myopic_threshold: no sign change in bracket");
      lo *= 2.0;
      hi *= 2.0;
      flo = residual(lo);
      fhi = residual(hi);
    }
    root = 0.0;
    bool found = false;
    for (int iter = 0; iter < 300; ++iter) {
      const double mid = 0.5 * (lo + hi);
      const double fm = residual(mid);
      if (std::fabs(fm) <= settings_.root_tol) {
        root = mid;
        found = true;
        break;
      }
      if (fm < 0.0)
        lo = mid;
      else
        hi = mid;
    }
    if (!found) fail(errc::no_sign_change, "myopic_threshold: residual tolerance not reached");
  }

  std::unique_lock lock(cache_mutex_);
  threshold_cache_.emplace(key, root);
  return root;
}

std::optional<int> expectation_engine::dominant_action(player i, double s_own,
                                                       const belief_interval& S_other) const {
  check_signal(s_own, "dominant_action");
  check_interval(S_other, "dominant_action");
  if (S_other.bounded_below() && s_own > model_.indifference_point(i, S_other.lo)) return +1;
  if (S_other.bounded_above() && s_own < model_.indifference_point(i, S_other.hi)) return -1;
  return std::nullopt;
}

}  // namespace obslearn
