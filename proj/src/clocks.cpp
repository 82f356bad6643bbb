#include "pdmp/clocks.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace pdmp {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

double rate_at(const ClockSpec& clock, double t) {
  return std::visit(
      [t](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ConstantClock>) {
          return c.rate;
        } else if constexpr (std::is_same_v<T, LinearClock>) {
          return std::max(0.0, c.a + c.b * t);
        } else if constexpr (std::is_same_v<T, AbsLinearClock>) {
          return c.scale * std::abs(c.x + t * c.v - c.mu) / (c.sigma * c.sigma);
        } else if constexpr (std::is_same_v<T, SuperpositionClock>) {
          double s = 0.0;
          for (const auto& p : c.parts) s += rate_at(p, t);
          return s;
        } else {
          return c.true_rate(t);
        }
      },
      clock.node());
}

ClockSpec advance(const ClockSpec& clock, double dt) {
  return std::visit(
      [dt](const auto& c) -> ClockSpec {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ConstantClock>) {
          return c;
        } else if constexpr (std::is_same_v<T, LinearClock>) {
          return LinearClock{c.a + c.b * dt, c.b};
        } else if constexpr (std::is_same_v<T, AbsLinearClock>) {
          return AbsLinearClock{c.x + dt * c.v, c.v, c.mu, c.sigma, c.scale};
        } else if constexpr (std::is_same_v<T, SuperpositionClock>) {
          SuperpositionClock out;
          out.parts.reserve(c.parts.size());
          for (const auto& p : c.parts) out.parts.push_back(advance(p, dt));
          return out;
        } else {
          ThinnedClock out;
          out.bound = std::make_shared<const ClockSpec>(advance(*c.bound, dt));
          out.true_rate = [f = c.true_rate, dt](double t) { return f(dt + t); };
          return out;
        }
      },
      clock.node());
}

std::optional<double> invert_constant(double rate, double z) {
  require(rate >= 0.0, "invert_constant: rate must be >= 0");
  require(z > 0.0, "invert_constant: z must be > 0");
  if (rate == 0.0) return std::nullopt;
  return z / rate;
}

std::optional<double> invert_linear(double a, double b, double z) {
  require(b >= 0.0, "invert_linear: slope must be >= 0");
  require(z > 0.0, "invert_linear: z must be > 0");
  if (b == 0.0) return invert_constant(std::max(0.0, a), z);
  if (a >= 0.0) {
    // Solve a t + b t^2 / 2 = z; the root is written to avoid cancellation.
    return 2.0 * z / (a + std::sqrt(a * a + 2.0 * b * z));
  }
  // Rate is zero until t0 = -a/b, then grows linearly from 0.
  return -a / b + std::sqrt(2.0 * z / b);
}

std::optional<double> invert_abs_linear(double x, double v, double mu, double sigma, double z) {
  require(sigma > 0.0, "invert_abs_linear: sigma must be > 0");
  require(z > 0.0, "invert_abs_linear: z must be > 0");
  const double s2 = sigma * sigma;
  const double c = x - mu;

  if (v == 0.0) {
    if (c == 0.0) return std::nullopt;
    return z * s2 / std::abs(c);
  }

  if (v > 0.0 && c > 0.0) {
    // Receding above mu: eta(t) = (v t^2 / 2 + c t) / s2.
    const double r = c / v;
    return 2.0 * s2 * z / v / (r + std::sqrt(r * r + 2.0 * s2 * z / v));
  }
  if (v < 0.0 && c < 0.0) {
    // Receding below mu; same algebra with reversed signs.
    const double r = c / v;
    return -2.0 * s2 * z / v / (r + std::sqrt(r * r - 2.0 * s2 * z / v));
  }

  // Approaching mu: rate decreases to 0 at the corner t0, then grows again.
  // eta(t0) = c^2 / (2 |v| s2) is the mass available before the corner.
  const double av = std::abs(v);
  const double t0 = -c / v;  // >= 0 in both remaining sign cases
  const double eta0 = c * c / (2.0 * av * s2);
  if (z > eta0) {
    return t0 + std::sqrt(2.0 * s2 * (z - eta0) / av);
  }
  // First crossing before the corner (the smaller quadratic root).
  const double q = 2.0 * s2 * z / av;
  return q / (t0 + std::sqrt(t0 * t0 - q));
}

std::optional<double> first_arrival_constant(double rate, RngStream& rng) {
  if (rate == 0.0) return std::nullopt;
  require(rate > 0.0, "first_arrival_constant: rate must be >= 0");
  return rng.exponential(rate);
}

std::optional<double> first_arrival_linear(double a, double b, RngStream& rng) {
  return invert_linear(a, b, -std::log(rng.uniform()));
}

std::optional<Arrival> first_arrival_superposition(const std::vector<ClockSpec>& parts,
                                                   RngStream& rng, double horizon) {
  std::optional<Arrival> best;
  long long proposals = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    auto a = first_arrival(parts[i], rng, horizon);
    if (!a) continue;
    proposals += a->proposals;
    if (!best || a->time < best->time) best = Arrival{a->time, static_cast<int>(i), 0};
  }
  if (best) best->proposals = proposals;
  return best;
}

std::optional<Arrival> first_arrival_thinned(const ClockSpec& bound,
                                             const std::function<double(double)>& true_rate,
                                             RngStream& rng, double horizon) {
  double t = 0.0;
  long long proposals = 0;
  ClockSpec current = bound;
  while (true) {
    auto prop = first_arrival(current, rng);
    if (!prop) return std::nullopt;  // bound exhausted, so the true clock is too
    t += prop->time;
    // Checked before the acceptance draw so callers that stop at the same
    // horizon consume identical random streams.
    if (t >= horizon) return std::nullopt;
    ++proposals;
    if (proposals > kThinningProposalCap) {
      throw BoundTooLoose("first_arrival_thinned: proposal cap exceeded");
    }
    const double b = rate_at(bound, t);
    const double l = true_rate(t);
    if (l > b * (1.0 + 1e-9)) {
      throw InvalidBound("first_arrival_thinned: true rate " + std::to_string(l) +
                         " exceeds bound " + std::to_string(b) + " at t=" + std::to_string(t));
    }
    const double u = rng.uniform();
    const double accept = b > 0.0 ? l / b : 0.0;
    if (u <= accept) return Arrival{t, -1, proposals};
    // Restart the bound from the rejected proposal time; for non-constant
    // bounds the integrated rate must be shifted, not reused.
    current = advance(bound, t);
  }
}

std::optional<Arrival> first_arrival(const ClockSpec& clock, RngStream& rng, double horizon) {
  return std::visit(
      [&rng, horizon](const auto& c) -> std::optional<Arrival> {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ConstantClock>) {
          auto t = first_arrival_constant(c.rate, rng);
          if (!t) return std::nullopt;
          return Arrival{*t, -1, 0};
        } else if constexpr (std::is_same_v<T, LinearClock>) {
          auto t = first_arrival_linear(c.a, c.b, rng);
          if (!t) return std::nullopt;
          return Arrival{*t, -1, 0};
        } else if constexpr (std::is_same_v<T, AbsLinearClock>) {
          if (c.scale == 0.0) return std::nullopt;
          require(c.scale > 0.0, "first_arrival: AbsLinearClock scale must be >= 0");
          const double z = -std::log(rng.uniform()) / c.scale;
          auto t = invert_abs_linear(c.x, c.v, c.mu, c.sigma, z);
          if (!t) return std::nullopt;
          return Arrival{*t, -1, 0};
        } else if constexpr (std::is_same_v<T, SuperpositionClock>) {
          return first_arrival_superposition(c.parts, rng, horizon);
        } else {
          return first_arrival_thinned(*c.bound, c.true_rate, rng, horizon);
        }
      },
      clock.node());
}

}  // namespace pdmp
