// Batch front-end for the obslearn shared library. Links the C API only.
#include "CLI11.hpp"
#include "obslearn/obslearn.h"

#include <cstdio>
#include <cstdlib>
#include <string>

namespace {

constexpr int kExitError = 3;  // anything other than a completed run

const char* outcome_name(int outcome) {
  switch (outcome) {
    case 0: return "consistent";
    case 1: return "inconsistent";
    case 2: return "inconclusive";
    default: return "unknown";
  }
}

struct common_opts {
  std::string config_path;
  std::string out_dir;
  unsigned long long seed = 0;
  int workers = 0;
  bool seed_set = false;
  bool out_set = false;
  bool workers_set = false;
  bool verbose = false;
};

void add_common(CLI::App* cmd, common_opts& o) {
  cmd->add_option("--config", o.config_path, "experiment configuration JSON")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out_dir, "output directory (overrides config)")
      ->each([&o](const std::string&) { o.out_set = true; });
  cmd->add_option("--seed", o.seed, "RNG seed for Monte Carlo oracles (overrides config)")
      ->each([&o](const std::string&) { o.seed_set = true; });
  cmd->add_option("--workers", o.workers, "worker threads for sweeps")
      ->check(CLI::Range(1, 64))
      ->each([&o](const std::string&) { o.workers_set = true; });
  cmd->add_flag("--verbose", o.verbose, "print phase timings to stderr");
}

int fail_with_last_error(const char* what) {
  std::fprintf(stderr, "obslearn: %s: %s\n", what, obslearn_last_error());
  return kExitError;
}

// --workers beats OBSLEARN_WORKERS beats the built-in default.
int resolve_workers(const common_opts& o, int* workers_out) {
  if (o.workers_set) {
    *workers_out = o.workers;
    return 0;
  }
  const char* env = std::getenv("OBSLEARN_WORKERS");
  if (!env || !*env) {
    *workers_out = 0;
    return 0;
  }
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (!end || *end != '\0' || v < 1 || v > 64) {
    std::fprintf(stderr, "obslearn: OBSLEARN_WORKERS must be an integer in [1,64], got \"%s\"\n",
                 env);
    return kExitError;
  }
  *workers_out = static_cast<int>(v);
  return 0;
}

int apply_common(obslearn_config* cfg, const common_opts& o) {
  if (o.out_set && obslearn_config_set_output_dir(cfg, o.out_dir.c_str()) != OBSLEARN_OK)
    return fail_with_last_error("--out");
  if (o.seed_set && obslearn_config_set_seed(cfg, o.seed) != OBSLEARN_OK)
    return fail_with_last_error("--seed");
  int workers = 0;
  if (resolve_workers(o, &workers) != 0) return kExitError;
  if (workers > 0 && obslearn_config_set_workers(cfg, workers) != OBSLEARN_OK)
    return fail_with_last_error("--workers");
  if (o.verbose && obslearn_config_set_verbose(cfg, 1) != OBSLEARN_OK)
    return fail_with_last_error("--verbose");
  return 0;
}

int run_one(const char* name, const common_opts& o,
            obslearn_status (*fn)(const obslearn_config*, int*)) {
  obslearn_config* cfg = nullptr;
  if (obslearn_config_load(o.config_path.c_str(), &cfg) != OBSLEARN_OK)
    return fail_with_last_error("config");
  int rc = apply_common(cfg, o);
  if (rc != 0) {
    obslearn_config_destroy(cfg);
    return rc;
  }
  int outcome = -1;
  const obslearn_status st = fn(cfg, &outcome);
  obslearn_config_destroy(cfg);
  if (st != OBSLEARN_OK) return fail_with_last_error(name);
  std::printf("%s: %s\n", name, outcome_name(outcome));
  return outcome;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"observational learning lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", []() { return std::string(obslearn_version()); });

  common_opts sim_o, check_o, agg_o, con_o, ora_o;
  double s_a = 0.0, s_b = 0.0;

  CLI::App* sim = app.add_subcommand("simulate", "trace myopic play from one signal pair");
  add_common(sim, sim_o);
  sim->add_option("--sa", s_a, "player a's signal")->required();
  sim->add_option("--sb", s_b, "player b's signal")->required();

  CLI::App* check = app.add_subcommand("check", "equilibrium check (routed by model symmetry)");
  add_common(check, check_o);

  CLI::App* agg = app.add_subcommand("aggregate", "score long-run agreement against the state");
  add_common(agg, agg_o);

  CLI::App* con = app.add_subcommand("construct", "dump the asymmetric escape construction");
  add_common(con, con_o);

  CLI::App* ora = app.add_subcommand("oracle", "Monte Carlo cross-checks of the quadrature path");
  add_common(ora, ora_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  if (sim->parsed()) {
    obslearn_config* cfg = nullptr;
    if (obslearn_config_load(sim_o.config_path.c_str(), &cfg) != OBSLEARN_OK)
      return fail_with_last_error("config");
    int rc = apply_common(cfg, sim_o);
    if (rc != 0) {
      obslearn_config_destroy(cfg);
      return rc;
    }
    int outcome = -1;
    const obslearn_status st = obslearn_run_simulate(cfg, s_a, s_b, &outcome);
    obslearn_config_destroy(cfg);
    if (st != OBSLEARN_OK) return fail_with_last_error("simulate");
    std::printf("simulate: %s\n", outcome_name(outcome));
    return outcome;
  }
  if (check->parsed()) return run_one("check", check_o, obslearn_run_check);
  if (agg->parsed()) return run_one("aggregate", agg_o, obslearn_run_aggregate);
  if (con->parsed()) return run_one("construct", con_o, obslearn_run_construct);
  if (ora->parsed()) return run_one("oracle", ora_o, obslearn_run_oracle);
  return kExitError;
}
