// Deterministic random streams for the samplers and the experiment harness.
//
// All randomness flows through RngStream so that a run is reproducible from a
// single 64-bit seed.  Distribution mappings (uniform bits -> double, Box-Muller)
// are implemented here rather than via std:: distributions, whose output is not
// pinned down by the standard; with a fixed engine the streams below are stable
// across compilers and platforms.

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Core>

namespace pdmp {

using Vec = Eigen::VectorXd;

// SplitMix64 finalizer; bijective on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x);

// Order-sensitive seed derivation: mix a value or a label into a running hash.
std::uint64_t mix_seed(std::uint64_t h, std::uint64_t v);
std::uint64_t mix_seed(std::uint64_t h, std::string_view label);

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Independent stream for a named role, derived from this stream's seed.
  RngStream substream(std::string_view role) const {
    return RngStream(mix_seed(seed_, role));
  }

  // Uniform on the open interval (0,1); never returns 0, so -log(u) is finite.
  double uniform();

  // Standard normal via Box-Muller, one variate per call (no pair caching, so
  // the draw count per call is fixed).
  double normal();

  // Exponential with the given rate; rate must be > 0.
  double exponential(double rate);

  // Uniform on {0,...,n-1}, unbiased via rejection.
  std::uint64_t uniform_index(std::uint64_t n);

  Vec standard_normal(int d);

  // Uniform on the unit sphere S_{d-1}.
  Vec unit_sphere(int d);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace pdmp
