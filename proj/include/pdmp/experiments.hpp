// Experiment harness: named experiment bundles driven by a JSON config.
//
// Each experiment expands into independent cells (sampler x replication),
// every cell seeded by a stable hash of (master seed, experiment, sampler,
// replication), so results are reproducible and independent of worker count
// or scheduling.  A manifest records resolved settings, per-cell status, and
// content hashes of every written file.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pdmp/samplers.hpp"
#include "pdmp/targets.hpp"

namespace pdmp {

inline constexpr std::uint64_t kDefaultMasterSeed = 20260815;

struct LogisticSettings {
  int d = 5;
  int n_obs = 100;
  int subsample_size = 10;  // recorded in run metadata; events draw single indices
  long long mh_iterations = 100'000;
  double mh_burn_frac = 0.1;
};

struct ExperimentSpec {
  std::string experiment;  // gauss-reducibility | gauss-sweep | mixture | logistic
  int replications = 0;    // 0 means the experiment default
  std::uint64_t master_seed = kDefaultMasterSeed;
  std::string out_dir;     // empty means results/<experiment>
  double path_length = 0;  // 0 means the experiment default
  std::vector<double> lambda_refs = {0.01, 0.1, 0.2, 0.5, 1.0};
  MixtureParams mixture;
  LogisticSettings logistic;
  int workers = 1;
  bool smoke = false;
};

// Parse and validate; throws std::invalid_argument naming the offending field.
ExperimentSpec parse_config(const nlohmann::json& j);
ExperimentSpec load_config(const std::string& path);

// Resolved defaults (replications, path length, out_dir) for the experiment,
// with smoke scaling applied.
ExperimentSpec resolve_spec(ExperimentSpec spec);

std::uint64_t derive_cell_seed(std::uint64_t master, const std::string& experiment,
                               const std::string& sampler, int rep);

struct CellOutcome {
  std::string id;
  std::string sampler;
  int rep = 0;
  std::uint64_t seed = 0;
  std::string status = "ok";
  double runtime_s = 0.0;
  std::map<std::string, double> metrics;
};

struct ExperimentResult {
  bool partial = false;
  std::string out_dir;
  std::vector<CellOutcome> cells;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace pdmp
