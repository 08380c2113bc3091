#include "core/rng.hpp"

#include "core/normal.hpp"

namespace obslearn {

double deterministic_rng::normal(double mean, double sd) {
  return mean + sd * normal_quantile(uniform01());
}

}  // namespace obslearn
