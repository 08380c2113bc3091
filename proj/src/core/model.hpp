#pragma once

#include <memory>

#include "core/errors.hpp"

namespace obslearn {

enum class player { a = 0, b = 1 };

inline player opponent(player p) { return p == player::a ? player::b : player::a; }
inline const char* player_name(player p) { return p == player::a ? "a" : "b"; }

// Primitive densities of an information structure: a prior over the hidden
// state and one signal kernel per player. Everything downstream that cannot
// use a closed form integrates these.
class signal_family {
public:
  virtual ~signal_family() = default;
  virtual double prior_density(double x) const = 0;
  virtual double signal_density(player i, double s, double x) const = 0;
};

// State x ~ N(0, sigma0^2); signals s_i = x + eps_i with eps_i ~ N(0, sigma_i^2).
// Posterior means and signal-conditional signal densities are Gaussian closed
// forms; they are arranged so that negating every signal negates every mean
// exactly in IEEE arithmetic (used by the mirror-symmetry tests).
class gaussian_model : public signal_family {
public:
  gaussian_model(double sigma0, double sigma_a, double sigma_b);

  double sigma0() const { return sigma0_; }
  double noise_sd(player i) const { return i == player::a ? sigma_a_ : sigma_b_; }
  double signal_sd(player i) const;  // sd of the unconditional signal distribution
  bool symmetric() const { return sigma_a_ == sigma_b_; }

  // E[x | s_a, s_b]; positional arguments, player a first.
  double posterior_mean(double s_a, double s_b) const;

  // Same posterior mean with observer-relative arguments.
  double posterior_mean_as(player observer, double s_own, double s_other) const;

  // E[x | s_i] for a single signal.
  double marginal_state_mean(player i, double s_own) const;

  // Distribution of the opponent's signal given own signal: Normal(k*s_own, v).
  double cond_mean_coef(player observer) const;
  double cond_var(player observer) const;
  double cond_sd(player observer) const;

  // Type s at which posterior_mean_as(observer, s, s_other) crosses zero.
  double indifference_point(player observer, double s_other) const;

  double prior_density(double x) const override;
  double signal_density(player i, double s, double x) const override;

private:
  double sigma0_, sigma_a_, sigma_b_;
  double s0sq_, sasq_, sbsq_;
  double d_;                       // sa^2 sb^2 + s0^2 (sa^2 + sb^2)
  double coef_a_own_, coef_a_oth_; // posterior_mean = coef_own*s_own + coef_oth*s_other (observer a)
  double coef_b_own_, coef_b_oth_;
  double marg_coef_a_, marg_coef_b_;
  double cmean_a_, cmean_b_;       // cond mean coefficients
  double cvar_a_, cvar_b_;
};

}  // namespace obslearn
