#include "core/model.hpp"

#include <cmath>

#include "core/normal.hpp"

namespace obslearn {

gaussian_model::gaussian_model(double sigma0, double sigma_a, double sigma_b)
    : sigma0_(sigma0), sigma_a_(sigma_a), sigma_b_(sigma_b) {
  if (!(std::isfinite(sigma0) && sigma0 > 0.0) || !(std::isfinite(sigma_a) && sigma_a > 0.0) ||
      !(std::isfinite(sigma_b) && sigma_b > 0.0))
    fail(errc::invalid_argument, "gaussian_model: standard deviations must be positive and finite");
  s0sq_ = sigma0 * sigma0;
  sasq_ = sigma_a * sigma_a;
  sbsq_ = sigma_b * sigma_b;
  d_ = sasq_ * sbsq_ + s0sq_ * (sasq_ + sbsq_);
  coef_a_own_ = s0sq_ * sbsq_ / d_;
  coef_a_oth_ = s0sq_ * sasq_ / d_;
  coef_b_own_ = s0sq_ * sasq_ / d_;
  coef_b_oth_ = s0sq_ * sbsq_ / d_;
  marg_coef_a_ = s0sq_ / (s0sq_ + sasq_);
  marg_coef_b_ = s0sq_ / (s0sq_ + sbsq_);
  cmean_a_ = marg_coef_a_;  // E[s_b | s_a] = s_a * sigma0^2 / (sigma0^2 + sigma_a^2)
  cmean_b_ = marg_coef_b_;
  cvar_a_ = d_ / (s0sq_ + sasq_);
  cvar_b_ = d_ / (s0sq_ + sbsq_);
}

double gaussian_model::signal_sd(player i) const {
  return std::sqrt(s0sq_ + (i == player::a ? sasq_ : sbsq_));
}

double gaussian_model::posterior_mean(double s_a, double s_b) const {
  if (!std::isfinite(s_a) || !std::isfinite(s_b))
    fail(errc::invalid_argument, "posterior_mean: signals must be finite");
  return s_a * coef_a_own_ + s_b * coef_a_oth_;
}

double gaussian_model::posterior_mean_as(player observer, double s_own, double s_other) const {
  if (observer == player::a) return posterior_mean(s_own, s_other);
  return s_own * coef_b_own_ + s_other * coef_b_oth_;
}

double gaussian_model::marginal_state_mean(player i, double s_own) const {
  if (!std::isfinite(s_own)) fail(errc::invalid_argument, "marginal_state_mean: signal must be finite");
  return s_own * (i == player::a ? marg_coef_a_ : marg_coef_b_);
}

double gaussian_model::cond_mean_coef(player observer) const {
  return observer == player::a ? cmean_a_ : cmean_b_;
}

double gaussian_model::cond_var(player observer) const {
  return observer == player::a ? cvar_a_ : cvar_b_;
}

double gaussian_model::cond_sd(player observer) const { return std::sqrt(cond_var(observer)); }

double gaussian_model::indifference_point(player observer, double s_other) const {
  // Solve coef_own * s + coef_oth * s_other = 0.
  if (observer == player::a) return -s_other * (sasq_ / sbsq_);
  return -s_other * (sbsq_ / sasq_);
}

double gaussian_model::prior_density(double x) const { return normal_pdf(x / sigma0_) / sigma0_; }

double gaussian_model::signal_density(player i, double s, double x) const {
  double sd = noise_sd(i);
  return normal_pdf((s - x) / sd) / sd;
}

}  // namespace obslearn
