#pragma once

#include <string>
#include <vector>

#include "core/config.hpp"

namespace obslearn {

// Exit-code contract shared by the library runners and the CLI: 0 when the
// run reproduced the expected qualitative outcome, 1 when it refuted it,
// 2 when the run could not decide.
enum class run_outcome { consistent = 0, inconsistent = 1, inconclusive = 2 };

struct run_result {
  run_outcome outcome = run_outcome::consistent;
  std::vector<std::string> outputs;  // file names written into config.output_dir
};

run_result run_simulate(const experiment_config& cfg, double s_a, double s_b);
run_result run_check(const experiment_config& cfg);
run_result run_aggregate(const experiment_config& cfg);
run_result run_construct(const experiment_config& cfg);
run_result run_oracle(const experiment_config& cfg);

}  // namespace obslearn
