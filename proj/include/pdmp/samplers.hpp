// Event-driven samplers over a TargetModel, plus a random-walk MH baseline.
//
// All samplers run a fixed path length in process time: the chain stops at
// the first event time >= path_length and the final segment is truncated at
// t_final = path_length.  Every recorded skeleton starts with the t=0 state.

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "pdmp/core.hpp"
#include "pdmp/targets.hpp"

namespace pdmp {

struct RunConfig {
  double path_length = 1e4;
  double lambda_ref = 0.0;  // BPS refreshment rate; 0 disables refreshment
  std::uint64_t seed = 1;
  Vec x0;                   // empty means the origin
  long long max_events = 10'000'000;
};

// Bouncy particle sampler: unit-speed velocities, specular reflection at
// bounce events, full velocity refresh from the unit sphere at rate
// lambda_ref.  Ties between the two clocks resolve to the bounce.
Skeleton run_bps(const TargetModel& target, const RunConfig& cfg);

// Generalized BPS: free velocities with stationary law N(0, I_d); at each
// event the gradient-parallel component flips and the orthogonal component is
// redrawn as a standard normal on the gradient's orthogonal hyperplane.
Skeleton run_gbps(const TargetModel& target, const RunConfig& cfg);

// GBPS with a subsampled logistic score: proposals from the constant bound
// logistic_bound(v), a uniformly drawn observation index per proposal, and
// acceptance probability rate(Delta, v)/bound.  Rejected proposals advance
// the position but are not recorded.  The index stream is a substream of the
// run seed, kept separate from the time/acceptance stream.
Skeleton run_gbps_subsampled(const LogisticModel& model, const RunConfig& cfg);

struct MHConfig {
  double step_scale = 1.0;
  long long iterations = 100'000;
  long long burn_in = 10'000;
  std::uint64_t seed = 1;
  Vec x0;  // empty means the origin
};

struct MHResult {
  std::vector<Vec> samples;  // post burn-in states, one per iteration
  double acceptance_rate = 0.0;
};

// Random-walk Metropolis with isotropic Gaussian proposals.
MHResult run_mh(const TargetModel& target, const MHConfig& cfg);

// Pilot-run tuning of the proposal scale towards acceptance in [0.2, 0.5].
double tune_mh_scale(const TargetModel& target, const Vec& x0, std::uint64_t seed,
                     long long pilot_iterations = 2000);

}  // namespace pdmp
