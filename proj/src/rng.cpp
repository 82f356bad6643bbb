#include "pdmp/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pdmp {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t mix_seed(std::uint64_t h, std::uint64_t v) {
  return splitmix64(h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)));
}

std::uint64_t mix_seed(std::uint64_t h, std::string_view label) {
  // FNV-1a over the label bytes, then mixed into the running hash.
  std::uint64_t f = 0xcbf29ce484222325ull;
  for (unsigned char c : label) {
    f ^= c;
    f *= 0x100000001b3ull;
  }
  return mix_seed(h, f);
}

double RngStream::uniform() {
  // 53-bit mantissa, offset by half an ulp so the result lies in (0,1).
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double RngStream::exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
  return -std::log(uniform()) / rate;
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: n must be > 0");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

Vec RngStream::standard_normal(int d) {
  Vec v(d);
  for (int i = 0; i < d; ++i) v[i] = normal();
  return v;
}

Vec RngStream::unit_sphere(int d) {
  if (d < 1) throw std::invalid_argument("unit_sphere: d must be >= 1");
  while (true) {
    Vec v = standard_normal(d);
    const double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

}  // namespace pdmp
