#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "oracles.hpp"
#include "pdmp/clocks.hpp"

using pdmp::AbsLinearClock;
using pdmp::ClockSpec;
using pdmp::ConstantClock;
using pdmp::LinearClock;
using pdmp::SuperpositionClock;
using pdmp::ThinnedClock;

namespace {

ClockSpec half_rate_thinned(const ClockSpec& bound) {
  ThinnedClock t;
  auto shared = std::make_shared<const ClockSpec>(bound);
  t.bound = shared;
  t.true_rate = [shared](double s) { return 0.5 * pdmp::rate_at(*shared, s); };
  return t;
}

}  // namespace

TEST_SUITE("clocks") {

TEST_CASE("constant inversion") {
  CHECK(*pdmp::invert_constant(2.0, 1.0) == 0.5);
  CHECK(!pdmp::invert_constant(0.0, 1.0));
  CHECK_THROWS_AS(pdmp::invert_constant(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(pdmp::invert_constant(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("linear inversion, closed forms") {
  // rate t: eta = t^2/2, so z = 1/2 gives t = 1.
  CHECK(*pdmp::invert_linear(0.0, 1.0, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
  // rate max(0, t - 1): mass starts at t = 1, z = 1/2 gives t = 2.
  CHECK(*pdmp::invert_linear(-1.0, 1.0, 0.5) == doctest::Approx(2.0).epsilon(1e-14));
  // flat positive rate falls back to the constant case
  CHECK(*pdmp::invert_linear(2.0, 0.0, 1.0) == 0.5);
  CHECK(!pdmp::invert_linear(-1.0, 0.0, 1.0));
  CHECK(!pdmp::invert_linear(0.0, 0.0, 1.0));
  CHECK_THROWS_AS(pdmp::invert_linear(1.0, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("abs-linear inversion, closed forms") {
  // Receding above mu: rate 1 + t, eta = t + t^2/2, z = 3/2 gives t = 1.
  CHECK(*pdmp::invert_abs_linear(2.0, 1.0, 1.0, 1.0, 1.5) == doctest::Approx(1.0).epsilon(1e-14));
  // Receding below mu by symmetry.
  CHECK(*pdmp::invert_abs_linear(0.0, -1.0, 1.0, 1.0, 1.5) == doctest::Approx(1.0).epsilon(1e-14));
  // Approaching with corner at t0 = 1, eta(t0) = 1/2; z = 1 lands at t = 2.
  CHECK(*pdmp::invert_abs_linear(2.0, -1.0, 1.0, 1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  // z exactly the corner mass returns the corner itself.
  CHECK(*pdmp::invert_abs_linear(2.0, -1.0, 1.0, 1.0, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
  // Before the corner: t - t^2/2 = 1/4 has smaller root 1 - sqrt(1/2).
  CHECK(*pdmp::invert_abs_linear(2.0, -1.0, 1.0, 1.0, 0.25) ==
        doctest::Approx(1.0 - std::sqrt(0.5)).epsilon(1e-14));
  // Starting at mu: rate t, z = 1/2 gives t = 1.
  CHECK(*pdmp::invert_abs_linear(1.0, 1.0, 1.0, 1.0, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
  // Frozen ray: constant rate |x - mu| / sigma^2.
  CHECK(*pdmp::invert_abs_linear(3.0, 0.0, 1.0, 1.0, 1.0) == 0.5);
  CHECK(!pdmp::invert_abs_linear(1.0, 0.0, 1.0, 1.0, 1.0));
  CHECK_THROWS_AS(pdmp::invert_abs_linear(1.0, 1.0, 0.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(pdmp::invert_abs_linear(1.0, 1.0, 0.0, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("inversion matches the numerically integrated rate") {
  pdmp::RngStream rng(211);
  for (int trial = 0; trial < 200; ++trial) {
    const double z = rng.exponential(1.0);

    const double a = 4.0 * rng.uniform() - 2.0;
    const double b = 3.0 * rng.uniform() + 0.01;
    const double tl = *pdmp::invert_linear(a, b, z);
    const ClockSpec lin{LinearClock{a, b}};
    const double il = oracles::integrate([&](double s) { return pdmp::rate_at(lin, s); }, 0.0, tl);
    CHECK(std::abs(il - z) < 1e-8 * std::max(1.0, z));

    const double x = 6.0 * rng.uniform() - 3.0;
    const double v = 4.0 * rng.uniform() - 2.0;
    const double mu = 2.0 * rng.uniform() - 1.0;
    const double sigma = 0.5 + 1.5 * rng.uniform();
    const double scale = 0.1 + 2.9 * rng.uniform();
    const double ta = *pdmp::invert_abs_linear(x, v, mu, sigma, z / scale);
    const ClockSpec abs_clock{AbsLinearClock{x, v, mu, sigma, scale}};
    const double ia =
        oracles::integrate([&](double s) { return pdmp::rate_at(abs_clock, s); }, 0.0, ta);
    CHECK(std::abs(ia - z) < 1e-8 * std::max(1.0, z));
  }
}

TEST_CASE("inversion is increasing in z") {
  double prev_lin = 0.0;
  double prev_abs = 0.0;
  for (double z = 0.05; z < 5.0; z += 0.05) {
    const double tl = *pdmp::invert_linear(-0.5, 0.8, z);
    const double ta = *pdmp::invert_abs_linear(1.5, -0.7, 0.2, 1.1, z);
    CHECK(tl > prev_lin);
    CHECK(ta > prev_abs);
    prev_lin = tl;
    prev_abs = ta;
  }
}

TEST_CASE("advance shifts the rate function") {
  std::vector<ClockSpec> clocks;
  clocks.push_back(ConstantClock{1.3});
  clocks.push_back(LinearClock{-0.4, 0.9});
  clocks.push_back(AbsLinearClock{2.0, -0.8, 0.5, 1.2, 1.7});
  SuperpositionClock sup;
  sup.parts = clocks;
  clocks.push_back(sup);
  clocks.push_back(half_rate_thinned(ClockSpec{LinearClock{0.2, 0.6}}));

  for (const auto& c : clocks) {
    for (double dt : {0.0, 0.3, 1.7}) {
      const ClockSpec shifted = pdmp::advance(c, dt);
      for (double t : {0.0, 0.25, 1.0, 2.9}) {
        CHECK(pdmp::rate_at(shifted, t) ==
              doctest::Approx(pdmp::rate_at(c, dt + t)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("superposition fires like the summed rate") {
  SuperpositionClock sup;
  sup.parts.push_back(ConstantClock{0.7});
  sup.parts.push_back(ConstantClock{1.3});
  const ClockSpec clock{sup};

  pdmp::RngStream rng(223);
  pdmp::RngStream ref_rng(977);
  const int n = 20000;
  std::vector<double> sim(n), ref(n);
  int first_component = 0;
  for (int i = 0; i < n; ++i) {
    const auto a = pdmp::first_arrival(clock, rng);
    REQUIRE(a.has_value());
    sim[i] = a->time;
    if (a->component == 0) ++first_component;
    ref[i] = ref_rng.exponential(2.0);
  }
  CHECK(oracles::ks_statistic(sim, ref) < oracles::ks_threshold(n, n, 1e-3));
  // Component 0 wins with probability 0.7 / 2.0 = 0.35.
  const double freq = static_cast<double>(first_component) / n;
  CHECK(std::abs(freq - 0.35) < 4.0 * std::sqrt(0.35 * 0.65 / n));
}

TEST_CASE("superposition of mixed families matches inversion of the total rate") {
  SuperpositionClock sup;
  sup.parts.push_back(ConstantClock{0.5});
  sup.parts.push_back(LinearClock{0.0, 1.0});
  const ClockSpec clock{sup};

  pdmp::RngStream rng(227);
  pdmp::RngStream ref_rng(229);
  const int n = 20000;
  std::vector<double> sim(n), ref(n);
  for (int i = 0; i < n; ++i) {
    sim[i] = pdmp::first_arrival(clock, rng)->time;
    ref[i] = *pdmp::invert_linear(0.5, 1.0, ref_rng.exponential(1.0));
  }
  CHECK(oracles::ks_statistic(sim, ref) < oracles::ks_threshold(n, n, 1e-3));
}

TEST_CASE("thinning with a tight bound reproduces the bound's arrival") {
  const ClockSpec bound{AbsLinearClock{2.0, -1.0, 0.5, 1.0, 1.0}};
  ThinnedClock thin;
  thin.bound = std::make_shared<const ClockSpec>(bound);
  thin.true_rate = [&bound](double t) { return pdmp::rate_at(bound, t); };

  for (std::uint64_t seed : {11u, 12u, 13u, 14u}) {
    pdmp::RngStream rng_a(seed);
    pdmp::RngStream rng_b(seed);
    const auto thinned = pdmp::first_arrival(ClockSpec{thin}, rng_a);
    const auto exact = pdmp::first_arrival(bound, rng_b);
    REQUIRE(thinned.has_value());
    REQUIRE(exact.has_value());
    CHECK(thinned->time == exact->time);  // same uniform feeds both inversions
    CHECK(thinned->proposals == 1);
  }
}

TEST_CASE("thinning restarts the bound after each rejection") {
  // True rate half the bound everywhere; the arrival law has integrated rate
  // eta(t) = (0.1 t + 0.3 t^2) so samples must match direct inversion.
  const ClockSpec bound{LinearClock{0.2, 1.2}};
  const ClockSpec thin = half_rate_thinned(bound);

  pdmp::RngStream rng(331);
  pdmp::RngStream ref_rng(337);
  const int n = 20000;
  std::vector<double> sim(n), ref(n);
  long long rejected = 0;
  for (int i = 0; i < n; ++i) {
    const auto a = pdmp::first_arrival(thin, rng);
    REQUIRE(a.has_value());
    sim[i] = a->time;
    rejected += a->proposals - 1;
    ref[i] = *pdmp::invert_linear(0.1, 0.6, ref_rng.exponential(1.0));
  }
  CHECK(oracles::ks_statistic(sim, ref) < oracles::ks_threshold(n, n, 1e-3));
  CHECK(rejected > 0);  // the half-rate target must actually reject sometimes
}

TEST_CASE("thinning raises when the bound is violated") {
  ThinnedClock thin;
  thin.bound = std::make_shared<const ClockSpec>(ConstantClock{1.0});
  thin.true_rate = [](double) { return 2.0; };
  pdmp::RngStream rng(401);
  CHECK_THROWS_AS(pdmp::first_arrival(ClockSpec{thin}, rng), pdmp::InvalidBound);
}

TEST_CASE("thinning raises when the bound never accepts") {
  ThinnedClock thin;
  thin.bound = std::make_shared<const ClockSpec>(ConstantClock{1000.0});
  thin.true_rate = [](double) { return 0.0; };
  pdmp::RngStream rng(403);
  CHECK_THROWS_AS(pdmp::first_arrival(ClockSpec{thin}, rng), pdmp::BoundTooLoose);
}

TEST_CASE("clocks with no mass report no arrival") {
  pdmp::RngStream rng(409);
  CHECK(!pdmp::first_arrival(ClockSpec{ConstantClock{0.0}}, rng));
  CHECK(!pdmp::first_arrival(ClockSpec{LinearClock{-1.0, 0.0}}, rng));
  CHECK(!pdmp::first_arrival(ClockSpec{AbsLinearClock{1.0, 0.0, 1.0, 1.0, 0.0}}, rng));

  SuperpositionClock sup;
  sup.parts.push_back(ConstantClock{0.0});
  sup.parts.push_back(LinearClock{-2.0, 0.0});
  CHECK(!pdmp::first_arrival(ClockSpec{sup}, rng));

  ThinnedClock thin;
  thin.bound = std::make_shared<const ClockSpec>(ConstantClock{0.0});
  thin.true_rate = [](double) { return 0.0; };
  CHECK(!pdmp::first_arrival(ClockSpec{thin}, rng));
}

}  // TEST_SUITE
