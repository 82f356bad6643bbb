// Path diagnostics: discretization, moments with autocorrelation-adjusted
// errors, effective sample size, Wasserstein-2 distances, kernel density
// estimates, and a collinearity check for reducible trajectories.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "pdmp/core.hpp"
#include "pdmp/targets.hpp"

namespace pdmp {

// Positions at times i * t_final / n, i = 1..n (equal spacing, no burn-in).
std::vector<Vec> discretize_path(const Skeleton& skel, long long n);

// Path estimator of E[h]: average of h over the discretized positions.
double path_average(const Skeleton& skel, long long n, const std::function<double(const Vec&)>& h);

// Effective sample size n / (1 + 2 sum rho_k) with Geyer's initial positive
// sequence truncation: lag pairs are summed while rho_{2m} + rho_{2m+1} > 0.
// A zero-variance series has ESS n by convention; strongly negative
// autocorrelation can push the estimate above n.
double ess(const std::vector<double>& series);

struct Moments {
  long long n = 0;
  Vec mean, second_moment;
  Vec se_mean, se_second;  // ESS-adjusted standard errors
  Vec ess_mean, ess_second;
};

Moments moments(const std::vector<Vec>& sample);

// W2 between empirical measures by quantile coupling; unequal sizes are
// handled by deterministic nearest-rank resampling to the larger size.
double wasserstein2_1d(std::vector<double> a, std::vector<double> b);

// Exact minimum-cost assignment (Hungarian with potentials, O(n^3)).
// Returns (total cost, row-to-column assignment).
std::pair<double, std::vector<int>> min_cost_assignment(const Eigen::MatrixXd& cost);

// W2 between planar point sets via exact assignment on m-point uniform
// subsamples (without replacement, deterministic given seed; m is capped at
// the smaller set size).  Equal-size inputs subsample the same indices, so
// translation shifts are recovered exactly.
double wasserstein2_2d(const std::vector<Vec>& a, const std::vector<Vec>& b, int m = 500,
                       std::uint64_t seed = 0);

struct GridSpec {
  double lo = 0.0, hi = 1.0;
  int n = 256;
};

struct DensityCurve {
  std::vector<double> x, f;
};

// Gaussian-kernel density on the grid, Silverman bandwidth
// 0.9 min(sd, IQR/1.34) n^{-1/5} with a positive fallback for degenerate
// samples.
DensityCurve kde_marginal(const std::vector<double>& sample, const GridSpec& grid);

// Minimum distance of the continuous path from the origin, including the
// truncated final segment; each linear segment is minimized in closed form.
double path_min_norm(const Skeleton& skel);

struct CollinearityReport {
  bool reducible = false;
  double max_deviation = 0.0;
};

// Maximum perpendicular deviation of event positions from the line through
// the initial state; reducible when below 1e-6 * (1 + path extent).
CollinearityReport collinearity_check(const Skeleton& skel);

struct DiagnosticsReport {
  int d = 0;
  long long n = 0;
  std::vector<double> mean, se_mean, second_moment, se_second, ess_points;
  std::vector<double> w2_marginal;      // vs. exact reference when available
  std::optional<double> w2_2d;          // only for d == 2 with a reference
  std::vector<DensityCurve> kde;        // per component
  CollinearityReport reducibility;
};

// Report over an already-discretized point set (no reducibility section).
// reference, when given, must expose sample_exact and supplies the W2 columns.
DiagnosticsReport diagnose_points(const std::vector<Vec>& pts, const TargetModel* reference = nullptr,
                                  int w2_subsample = 500, std::uint64_t seed = 0);

// Full report over the gap-1 discretization (n = floor(t_final), at least 1).
DiagnosticsReport diagnose_skeleton(const Skeleton& skel, const TargetModel* reference = nullptr,
                                    int w2_subsample = 500, std::uint64_t seed = 0);

}  // namespace pdmp
