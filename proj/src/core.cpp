#include "pdmp/core.hpp"

#include <algorithm>
#include <cmath>

namespace pdmp {

namespace {

void check_dims(const Vec& v, const Vec& g, const char* where) {
  if (v.size() != g.size() || v.size() == 0) {
    throw std::invalid_argument(std::string(where) + ": dimension mismatch");
  }
}

}  // namespace

double event_rate(const Vec& v, const Vec& g) {
  check_dims(v, g, "event_rate");
  return std::max(0.0, -v.dot(g));
}

Vec reflect(const Vec& v, const Vec& g) {
  check_dims(v, g, "reflect");
  const double gg = g.squaredNorm();
  if (g.norm() <= gradient_epsilon(v)) {
    throw DegenerateGradient("reflect: gradient too small to define a bounce");
  }
  return v - (2.0 * v.dot(g) / gg) * g;
}

std::pair<Vec, Vec> decompose(const Vec& v, const Vec& g) {
  check_dims(v, g, "decompose");
  if (g.norm() <= gradient_epsilon(v)) {
    throw DegenerateGradient("decompose: gradient too small");
  }
  Vec par = (v.dot(g) / g.squaredNorm()) * g;
  Vec perp = v - par;
  return {std::move(par), std::move(perp)};
}

Eigen::MatrixXd orthonormal_complement(const Vec& g) {
  const Eigen::Index d = g.size();
  const double gn = g.norm();
  if (d < 1 || !(gn > 0.0)) {
    throw DegenerateGradient("orthonormal_complement: zero gradient");
  }
  const Vec u = g / gn;

  // Skip the standard axis most parallel to u; Gram-Schmidt the rest.
  Eigen::Index skip = 0;
  u.cwiseAbs().maxCoeff(&skip);

  Eigen::MatrixXd basis(d, d - 1);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (i == skip) continue;
    Vec w = Vec::Zero(d);
    w[i] = 1.0;
    w -= u.dot(w) * u;
    for (Eigen::Index j = 0; j < col; ++j) {
      w -= basis.col(j).dot(w) * basis.col(j);
    }
    basis.col(col++) = w / w.norm();
  }
  return basis;
}

Vec gbps_kernel(const Vec& v, const Vec& g, RngStream& rng) {
  check_dims(v, g, "gbps_kernel");
  if (g.norm() <= gradient_epsilon(v)) {
    throw DegenerateGradient("gbps_kernel: gradient too small");
  }
  const Eigen::Index d = v.size();
  if (d == 1) return -v;  // no orthogonal complement; projection would add rounding noise
  Vec par = (v.dot(g) / g.squaredNorm()) * g;
  Vec next = -par;
  const Eigen::MatrixXd basis = orthonormal_complement(g);
  for (Eigen::Index i = 0; i < d - 1; ++i) {
    next += rng.normal() * basis.col(i);
  }
  return next;
}

void Skeleton::add(double t, Vec x, Vec v) {
  if (!times.empty() && !(t > times.back())) {
    throw std::invalid_argument("Skeleton::add: event times must be strictly increasing");
  }
  if (d == 0) d = static_cast<int>(x.size());
  if (x.size() != d || v.size() != d) {
    throw std::invalid_argument("Skeleton::add: dimension mismatch");
  }
  times.push_back(t);
  positions.push_back(std::move(x));
  velocities.push_back(std::move(v));
  if (t_final < t) t_final = t;
}

std::size_t Skeleton::segment_index(double t) const {
  if (times.empty()) throw std::invalid_argument("Skeleton: empty");
  auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return 0;
  return static_cast<std::size_t>(it - times.begin()) - 1;
}

Vec Skeleton::position_at(double t) const {
  const std::size_t i = segment_index(t);
  const double dt = std::max(0.0, t - times[i]);
  return positions[i] + dt * velocities[i];
}

Vec Skeleton::velocity_at(double t) const {
  return velocities[segment_index(t)];
}

}  // namespace pdmp
