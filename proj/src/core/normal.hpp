#pragma once

namespace obslearn {

// Standard normal density, cdf, and inverse cdf. The quantile is Acklam's
// rational approximation polished with one Halley step, accurate to ~1e-15
// over (0,1); endpoints return +-infinity.
double normal_pdf(double z);
double normal_cdf(double z);
double normal_quantile(double p);

}  // namespace obslearn
