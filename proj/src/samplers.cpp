#include "pdmp/samplers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pdmp/clocks.hpp"

namespace pdmp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec initial_position(const RunConfig& cfg, int d) {
  if (cfg.x0.size() == 0) return Vec::Zero(d);
  if (cfg.x0.size() != d) throw std::invalid_argument("RunConfig: x0 dimension mismatch");
  return cfg.x0;
}

void validate(const RunConfig& cfg) {
  if (!(cfg.path_length > 0.0)) throw std::invalid_argument("RunConfig: path_length must be > 0");
  if (cfg.lambda_ref < 0.0) throw std::invalid_argument("RunConfig: lambda_ref must be >= 0");
  if (cfg.max_events < 1) throw std::invalid_argument("RunConfig: max_events must be >= 1");
}

void check_event_budget(const Skeleton& skel, const RunConfig& cfg) {
  if (skel.meta.n_events >= cfg.max_events) {
    throw RunawayChain("event count exceeded max_events=" + std::to_string(cfg.max_events));
  }
}

}  // namespace

Skeleton run_bps(const TargetModel& target, const RunConfig& cfg) {
  validate(cfg);
  RngStream rng(cfg.seed);
  const int d = target.d;

  Vec x = initial_position(cfg, d);
  Vec v = rng.unit_sphere(d);

  Skeleton skel;
  skel.meta.sampler = "bps";
  skel.meta.seed = cfg.seed;
  skel.add(0.0, x, v);

  double t = 0.0;
  while (true) {
    check_event_budget(skel, cfg);
    const double horizon = cfg.path_length - t;
    const ClockSpec clock = target.event_clock(x, v);
    const auto bounce = first_arrival(clock, rng, horizon);
    const double tau_bounce = bounce ? bounce->time : kInf;
    const double tau_ref = cfg.lambda_ref > 0.0 ? rng.exponential(cfg.lambda_ref) : kInf;
    const double tau = std::min(tau_bounce, tau_ref);
    if (tau >= horizon) break;

    t += tau;
    x = x + tau * v;
    if (bounce) skel.meta.n_proposals += bounce->proposals;

    if (tau_bounce <= tau_ref) {  // ties resolve to the bounce
      const Vec g = target.grad_log_density(x);
      if (g.norm() <= gradient_epsilon(v)) {
        v = rng.unit_sphere(d);
        ++skel.meta.n_refreshes;
      } else {
        v = reflect(v, g);
        ++skel.meta.n_bounces;
      }
      if (bounce->proposals > 0) ++skel.meta.n_accepted;
    } else {
      v = rng.unit_sphere(d);
      ++skel.meta.n_refreshes;
    }
    skel.add(t, x, v);
    ++skel.meta.n_events;
  }
  skel.t_final = cfg.path_length;
  return skel;
}

Skeleton run_gbps(const TargetModel& target, const RunConfig& cfg) {
  validate(cfg);
  RngStream rng(cfg.seed);
  const int d = target.d;

  Vec x = initial_position(cfg, d);
  Vec v = rng.standard_normal(d);

  Skeleton skel;
  skel.meta.sampler = "gbps";
  skel.meta.seed = cfg.seed;
  skel.add(0.0, x, v);

  double t = 0.0;
  while (true) {
    check_event_budget(skel, cfg);
    // The horizon keeps thinned clocks from proposing past the end of the
    // path; without it a vanishing true rate under a positive bound (for
    // instance a logistic posterior drifting into saturation) would spin the
    // proposal loop until the cap.
    const double horizon = cfg.path_length - t;
    const ClockSpec clock = target.event_clock(x, v);
    const auto arrival = first_arrival(clock, rng, horizon);
    if (!arrival || arrival->time >= horizon) break;

    t += arrival->time;
    // Recomputed from the flight start so the event position matches the
    // point at which the clock evaluated the rate.
    x = x + arrival->time * v;
    skel.meta.n_proposals += arrival->proposals;
    if (arrival->proposals > 0) ++skel.meta.n_accepted;

    const Vec g = target.grad_log_density(x);
    if (g.norm() <= gradient_epsilon(v)) {
      v = rng.standard_normal(d);
      ++skel.meta.n_refreshes;
    } else {
      v = gbps_kernel(v, g, rng);
      ++skel.meta.n_bounces;
    }
    skel.add(t, x, v);
    ++skel.meta.n_events;
  }
  skel.t_final = cfg.path_length;
  return skel;
}

Skeleton run_gbps_subsampled(const LogisticModel& model, const RunConfig& cfg) {
  validate(cfg);
  if (model.col_max_abs.size() != model.d()) {
    throw std::invalid_argument("run_gbps_subsampled: model not finalized");
  }
  RngStream rng(cfg.seed);
  RngStream idx_rng = rng.substream("subsample-index");
  const int d = model.d();
  const int n = model.n();

  Vec flight_x = initial_position(cfg, d);
  Vec v = rng.standard_normal(d);

  Skeleton skel;
  skel.meta.sampler = "gbps-ss";
  skel.meta.seed = cfg.seed;
  skel.add(0.0, flight_x, v);

  double flight_start = 0.0;  // process time at the start of the current flight
  double flight_t = 0.0;      // elapsed time within the flight
  long long flight_proposals = 0;
  while (true) {
    check_event_budget(skel, cfg);
    const double bound = logistic_bound(model, v);
    if (bound == 0.0) break;  // rate identically zero: straight flight to the end

    // Same expression as the thinned-clock horizon check so the full-gradient
    // sampler on the equivalent target consumes an identical random stream.
    const double horizon = cfg.path_length - flight_start;
    flight_t += rng.exponential(bound);
    if (flight_t >= horizon) break;

    const int index = static_cast<int>(idx_rng.uniform_index(static_cast<std::uint64_t>(n)));
    const Vec p = flight_x + flight_t * v;
    const Vec delta = logistic_grad_subsampled(model, p, index);
    const double rate = event_rate(v, delta);
    if (rate > bound * (1.0 + 1e-9)) {
      throw InvalidBound("run_gbps_subsampled: rate " + std::to_string(rate) + " exceeds bound " +
                         std::to_string(bound));
    }
    if (++flight_proposals > kThinningProposalCap) {
      throw BoundTooLoose("run_gbps_subsampled: proposal cap exceeded");
    }
    const double u = rng.uniform();
    if (u <= rate / bound) {
      // Proposal work is booked per completed event; a flight cut off by the
      // end of the path leaves no trace, matching the thinned clock.
      skel.meta.n_proposals += flight_proposals;
      ++skel.meta.n_accepted;
      if (delta.norm() <= gradient_epsilon(v)) {
        v = rng.standard_normal(d);
        ++skel.meta.n_refreshes;
      } else {
        v = gbps_kernel(v, delta, rng);
        ++skel.meta.n_bounces;
      }
      const double t = flight_start + flight_t;
      skel.add(t, p, v);
      ++skel.meta.n_events;
      flight_x = p;
      flight_start = t;
      flight_t = 0.0;
      flight_proposals = 0;
    }
    // On rejection the position advances implicitly: the next proposal is
    // measured from the same flight origin with a larger flight_t.
  }
  skel.t_final = cfg.path_length;
  return skel;
}

MHResult run_mh(const TargetModel& target, const MHConfig& cfg) {
  if (!target.log_density) throw std::invalid_argument("run_mh: target lacks log_density");
  if (cfg.iterations < 1 || cfg.burn_in < 0 || cfg.burn_in >= cfg.iterations) {
    throw std::invalid_argument("run_mh: need 0 <= burn_in < iterations");
  }
  if (!(cfg.step_scale > 0.0)) throw std::invalid_argument("run_mh: step_scale must be > 0");

  RngStream rng(cfg.seed);
  const int d = target.d;
  Vec x = cfg.x0.size() == 0 ? Vec::Zero(d) : cfg.x0;
  if (x.size() != d) throw std::invalid_argument("run_mh: x0 dimension mismatch");
  double lp = target.log_density(x);

  MHResult out;
  out.samples.reserve(static_cast<std::size_t>(cfg.iterations - cfg.burn_in));
  long long accepted = 0;
  for (long long it = 0; it < cfg.iterations; ++it) {
    const Vec prop = x + cfg.step_scale * rng.standard_normal(d);
    const double lp_prop = target.log_density(prop);
    if (std::log(rng.uniform()) <= lp_prop - lp) {
      x = prop;
      lp = lp_prop;
      ++accepted;
    }
    if (it >= cfg.burn_in) out.samples.push_back(x);
  }
  out.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(cfg.iterations);
  return out;
}

double tune_mh_scale(const TargetModel& target, const Vec& x0, std::uint64_t seed,
                     long long pilot_iterations) {
  double scale = 2.38 / std::sqrt(static_cast<double>(target.d));
  for (int attempt = 0; attempt < 30; ++attempt) {
    MHConfig pilot;
    pilot.step_scale = scale;
    pilot.iterations = pilot_iterations;
    pilot.burn_in = pilot_iterations / 5;
    pilot.seed = mix_seed(seed, static_cast<std::uint64_t>(attempt));
    pilot.x0 = x0;
    const double acc = run_mh(target, pilot).acceptance_rate;
    if (acc < 0.2) {
      scale *= 0.5;
    } else if (acc > 0.5) {
      scale *= 2.0;
    } else {
      break;
    }
  }
  return scale;
}

}  // namespace pdmp
