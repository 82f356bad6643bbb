// Phase-space primitives shared by all samplers.
//
// A sampler state is (x, v) in R^d x R^d moving along straight lines between
// events.  Events occur at rate lambda(x, v) = max(0, -<v, grad log pi(x)>).
// At an event the velocity is transformed: reflection for BPS, a flip of the
// gradient-parallel component plus a fresh orthogonal draw for GBPS.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "pdmp/rng.hpp"

namespace pdmp {

struct DegenerateGradient : std::runtime_error {
  explicit DegenerateGradient(const std::string& what) : std::runtime_error(what) {}
};
struct InvalidBound : std::runtime_error {
  explicit InvalidBound(const std::string& what) : std::runtime_error(what) {}
};
struct BoundTooLoose : std::runtime_error {
  explicit BoundTooLoose(const std::string& what) : std::runtime_error(what) {}
};
struct RunawayChain : std::runtime_error {
  explicit RunawayChain(const std::string& what) : std::runtime_error(what) {}
};

struct PhaseState {
  Vec x;
  Vec v;
};

// Gradient norms at or below this threshold leave the bounce direction
// undefined; callers fall back to a velocity refresh instead.
inline double gradient_epsilon(const Vec& v) {
  return 1e-12 * std::max(1.0, v.norm());
}

// lambda(v, g) = max(0, -<v, g>) with g = grad log pi(x).
double event_rate(const Vec& v, const Vec& g);

// Specular reflection about the hyperplane orthogonal to g:
//   v - 2 <v,g>/<g,g> g.
// Throws DegenerateGradient when ||g|| <= gradient_epsilon(v).
Vec reflect(const Vec& v, const Vec& g);

// Split v into (parallel, orthogonal) parts relative to g.
std::pair<Vec, Vec> decompose(const Vec& v, const Vec& g);

// Orthonormal basis of the hyperplane orthogonal to g, as a d x (d-1) matrix.
// Built by modified Gram-Schmidt over the standard basis, skipping the axis
// most parallel to g; deterministic in g.
Eigen::MatrixXd orthonormal_complement(const Vec& g);

// GBPS event kernel: flip the gradient-parallel component of v, redraw the
// orthogonal component as a standard normal on the hyperplane g-perp.
// Consumes exactly d-1 normal variates.
Vec gbps_kernel(const Vec& v, const Vec& g, RngStream& rng);

struct SkeletonMeta {
  std::string sampler;
  std::uint64_t seed = 0;
  long long n_events = 0;     // recorded events, excluding the t=0 state
  long long n_bounces = 0;
  long long n_refreshes = 0;
  long long n_proposals = 0;  // thinning proposals (0 for exact clocks)
  long long n_accepted = 0;   // accepted proposals where thinning is used
};

// Event skeleton of a trajectory: states (T_i, x_i, v_i) with T_0 = 0 and the
// final segment truncated at t_final.  Between events the position moves as
// x_i + (t - T_i) v_i.
struct Skeleton {
  std::vector<double> times;
  std::vector<Vec> positions;
  std::vector<Vec> velocities;
  double t_final = 0.0;
  int d = 0;
  SkeletonMeta meta;

  std::size_t size() const { return times.size(); }

  void add(double t, Vec x, Vec v);

  // Index i of the segment covering t, i.e. the last event with T_i <= t.
  std::size_t segment_index(double t) const;

  Vec position_at(double t) const;
  Vec velocity_at(double t) const;
};

}  // namespace pdmp
