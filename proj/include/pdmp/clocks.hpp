// Inhomogeneous Poisson clocks along a ray x + t v, t >= 0.
//
// A clock is described by a ClockSpec; the first arrival is simulated either
// by exact inversion of the integrated rate eta(t), by superposition (minimum
// over component arrivals), or by thinning against a dominating bound.
// Inversion uses eta^{-1}(z) with z = -log(V), V ~ U(0,1); the z-taking
// overloads are deterministic and are what the unit tests exercise.

#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "pdmp/core.hpp"
#include "pdmp/rng.hpp"

namespace pdmp {

// rate(t) = rate, constant.  rate == 0 means the clock never fires.
struct ConstantClock {
  double rate = 0.0;
};

// rate(t) = max(0, a + b t) with b >= 0.
struct LinearClock {
  double a = 0.0;
  double b = 0.0;
};

// rate(t) = scale * |x + t v - mu| / sigma^2, a V-shaped rate with a corner
// where the ray crosses mu.  scale == 0 means the clock never fires.
struct AbsLinearClock {
  double x = 0.0;
  double v = 0.0;
  double mu = 0.0;
  double sigma = 1.0;
  double scale = 1.0;
};

class ClockSpec;

// Sum of component rates; fires when the first component fires.
struct SuperpositionClock {
  std::vector<ClockSpec> parts;
};

// True rate lambda(t) dominated by the bound clock's rate for all t >= 0.
struct ThinnedClock {
  std::shared_ptr<const ClockSpec> bound;
  std::function<double(double)> true_rate;
};

class ClockSpec {
 public:
  using Node =
      std::variant<ConstantClock, LinearClock, AbsLinearClock, SuperpositionClock, ThinnedClock>;

  ClockSpec(ConstantClock c) : node_(std::move(c)) {}
  ClockSpec(LinearClock c) : node_(std::move(c)) {}
  ClockSpec(AbsLinearClock c) : node_(std::move(c)) {}
  ClockSpec(SuperpositionClock c) : node_(std::move(c)) {}
  ClockSpec(ThinnedClock c) : node_(std::move(c)) {}

  const Node& node() const { return node_; }

 private:
  Node node_;
};

// Instantaneous rate at time t along the ray.
double rate_at(const ClockSpec& clock, double t);

// The same clock as seen from time dt onward: rate'(t) = rate(dt + t).
ClockSpec advance(const ClockSpec& clock, double dt);

// Exact inversions of the integrated rate; z > 0 is an exponential variate.
// Empty result means the clock never fires (finite total mass below z).
std::optional<double> invert_constant(double rate, double z);
std::optional<double> invert_linear(double a, double b, double z);
// Unit scale; AbsLinearClock::scale is applied by the ClockSpec dispatcher.
std::optional<double> invert_abs_linear(double x, double v, double mu, double sigma, double z);

struct Arrival {
  double time = 0.0;
  int component = -1;       // superposition: index of the part that fired
  long long proposals = 0;  // thinning proposals consumed
};

// Proposals after which thinning gives up; the bound is unusably loose.
inline constexpr long long kThinningProposalCap = 10'000'000;

// `horizon` caps the search: a thinned clock stops proposing once the
// accumulated proposal time reaches it and reports no arrival, without
// consuming an acceptance draw. Exact clocks ignore the horizon and may
// return an arrival at or past it; callers filter. Essential when the true
// rate can vanish under a positive bound (the proposal loop would otherwise
// spin until the cap).
std::optional<Arrival> first_arrival(const ClockSpec& clock, RngStream& rng,
                                     double horizon = std::numeric_limits<double>::infinity());

std::optional<double> first_arrival_constant(double rate, RngStream& rng);
std::optional<double> first_arrival_linear(double a, double b, RngStream& rng);
std::optional<Arrival> first_arrival_superposition(const std::vector<ClockSpec>& parts,
                                                   RngStream& rng, double horizon);

// Thinning loop: propose from the bound, accept with probability
// lambda(t)/bound(t), restart the bound from each rejected proposal time.
// Throws InvalidBound if lambda(t) > bound(t) beyond rounding slack, and
// BoundTooLoose past kThinningProposalCap proposals.
std::optional<Arrival> first_arrival_thinned(const ClockSpec& bound,
                                             const std::function<double(double)>& true_rate,
                                             RngStream& rng,
                                             double horizon = std::numeric_limits<double>::infinity());

}  // namespace pdmp
