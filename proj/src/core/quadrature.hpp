#pragma once

#include <cmath>
#include <functional>

#include "core/errors.hpp"

namespace obslearn {

struct quad_settings {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_subdivisions = 400;
  double tail_mass_cutoff = 1e-12;

  void validate() const {
    if (!(abs_tol > 0.0 && abs_tol < 1.0)) fail(errc::invalid_argument, "quad_settings: abs_tol outside (0,1)");
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) fail(errc::invalid_argument, "quad_settings: rel_tol outside (0,1)");
    if (max_subdivisions < 1) fail(errc::invalid_argument, "quad_settings: max_subdivisions < 1");
    if (!(tail_mass_cutoff > 0.0 && tail_mass_cutoff <= 1e-10))
      fail(errc::invalid_argument, "quad_settings: tail_mass_cutoff outside (0, 1e-10]");
  }
};

// Adaptive Gauss-Kronrod 7-15 on a finite interval. Node pairs are summed as
// f(c-x)+f(c+x) before weighting, so integrating the mirror image of an odd
// integrand over the mirrored interval yields the exact IEEE negation.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const quad_settings& settings);

}  // namespace obslearn
