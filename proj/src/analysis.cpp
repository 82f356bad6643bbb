#include "pdmp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "pdmp/rng.hpp"

namespace pdmp {

std::vector<Vec> discretize_path(const Skeleton& skel, long long n) {
  if (n < 1) throw std::invalid_argument("discretize_path: n must be >= 1");
  if (skel.size() == 0) throw std::invalid_argument("discretize_path: empty skeleton");
  if (!(skel.t_final > 0.0)) throw std::invalid_argument("discretize_path: t_final must be > 0");

  std::vector<Vec> points;
  points.reserve(static_cast<std::size_t>(n));
  std::size_t seg = 0;
  for (long long i = 1; i <= n; ++i) {
    const double t = skel.t_final * static_cast<double>(i) / static_cast<double>(n);
    while (seg + 1 < skel.size() && skel.times[seg + 1] <= t) ++seg;
    points.push_back(skel.positions[seg] + (t - skel.times[seg]) * skel.velocities[seg]);
  }
  return points;
}

double path_average(const Skeleton& skel, long long n,
                    const std::function<double(const Vec&)>& h) {
  const auto pts = discretize_path(skel, n);
  double sum = 0.0;
  for (const auto& p : pts) sum += h(p);
  return sum / static_cast<double>(pts.size());
}

double ess(const std::vector<double>& series) {
  const std::size_t n = series.size();
  if (n < 10) throw std::invalid_argument("ess: need at least 10 points");
  const double nd = static_cast<double>(n);
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / nd;

  std::vector<double> centered(n);
  for (std::size_t i = 0; i < n; ++i) centered[i] = series[i] - mean;
  const double c0 = std::inner_product(centered.begin(), centered.end(), centered.begin(), 0.0) / nd;
  if (c0 == 0.0) return nd;  // constant series

  auto rho = [&](std::size_t k) {
    double c = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) c += centered[i] * centered[i + k];
    return c / (nd * c0);
  };

  // Geyer initial positive sequence: accumulate pair sums while positive.
  double tau = -1.0;
  for (std::size_t m = 0; 2 * m < n; ++m) {
    const double even = rho(2 * m);
    const double odd = 2 * m + 1 < n ? rho(2 * m + 1) : 0.0;
    const double pair = even + odd;
    if (pair <= 0.0) break;
    tau += 2.0 * pair;
  }
  tau = std::max(tau, 1e-12);
  return nd / tau;
}

Moments moments(const std::vector<Vec>& sample) {
  if (sample.empty()) throw std::invalid_argument("moments: empty sample");
  const int d = static_cast<int>(sample[0].size());
  const long long n = static_cast<long long>(sample.size());

  Moments out;
  out.n = n;
  out.mean = Vec::Zero(d);
  out.second_moment = Vec::Zero(d);
  out.se_mean = Vec::Zero(d);
  out.se_second = Vec::Zero(d);
  out.ess_mean = Vec::Zero(d);
  out.ess_second = Vec::Zero(d);

  std::vector<double> xs(sample.size()), x2s(sample.size());
  for (int k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < sample.size(); ++i) {
      if (sample[i].size() != d) throw std::invalid_argument("moments: ragged sample");
      xs[i] = sample[i][k];
      x2s[i] = xs[i] * xs[i];
    }
    const double nd = static_cast<double>(n);
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / nd;
    const double m2 = std::accumulate(x2s.begin(), x2s.end(), 0.0) / nd;
    out.mean[k] = mean;
    out.second_moment[k] = m2;

    auto sd_of = [nd](const std::vector<double>& s, double mu) {
      double v = 0.0;
      for (double x : s) v += (x - mu) * (x - mu);
      return std::sqrt(v / nd);
    };
    const double e1 = n >= 10 ? ess(xs) : nd;
    const double e2 = n >= 10 ? ess(x2s) : nd;
    out.ess_mean[k] = e1;
    out.ess_second[k] = e2;
    out.se_mean[k] = sd_of(xs, mean) / std::sqrt(e1);
    out.se_second[k] = sd_of(x2s, m2) / std::sqrt(e2);
  }
  return out;
}

double wasserstein2_1d(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("wasserstein2_1d: empty input");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const std::size_t n = std::max(a.size(), b.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double q = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    const double xa = a[std::min(a.size() - 1, static_cast<std::size_t>(q * a.size()))];
    const double xb = b[std::min(b.size() - 1, static_cast<std::size_t>(q * b.size()))];
    sum += (xa - xb) * (xa - xb);
  }
  return std::sqrt(sum / static_cast<double>(n));
}

std::pair<double, std::vector<int>> min_cost_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  if (n == 0 || cost.cols() != n) {
    throw std::invalid_argument("min_cost_assignment: cost must be square and non-empty");
  }
  const double inf = std::numeric_limits<double>::infinity();
  // Shortest-augmenting-path Hungarian with dual potentials; indices are
  // 1-based with column 0 as the virtual source.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  double total = 0.0;
  for (int j = 1; j <= n; ++j) {
    row_to_col[p[j] - 1] = j - 1;
    total += cost(p[j] - 1, j - 1);
  }
  return {total, row_to_col};
}

namespace {

std::vector<std::size_t> subsample_indices(std::size_t size, std::size_t m, std::uint64_t seed) {
  std::vector<std::size_t> idx(size);
  std::iota(idx.begin(), idx.end(), 0);
  RngStream rng(mix_seed(seed, "w2-subsample"));
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + rng.uniform_index(size - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(m);
  return idx;
}

}  // namespace

double wasserstein2_2d(const std::vector<Vec>& a, const std::vector<Vec>& b, int m,
                       std::uint64_t seed) {
  if (a.empty() || b.empty()) throw std::invalid_argument("wasserstein2_2d: empty input");
  if (m < 1) throw std::invalid_argument("wasserstein2_2d: m must be >= 1");
  const std::size_t mm =
      std::min({static_cast<std::size_t>(m), a.size(), b.size()});
  const auto ia = subsample_indices(a.size(), mm, seed);
  const auto ib = subsample_indices(b.size(), mm, seed);

  Eigen::MatrixXd cost(mm, mm);
  for (std::size_t i = 0; i < mm; ++i) {
    for (std::size_t j = 0; j < mm; ++j) {
      cost(i, j) = (a[ia[i]] - b[ib[j]]).squaredNorm();
    }
  }
  const double total = min_cost_assignment(cost).first;
  return std::sqrt(total / static_cast<double>(mm));
}

DensityCurve kde_marginal(const std::vector<double>& sample, const GridSpec& grid) {
  if (sample.empty()) throw std::invalid_argument("kde_marginal: empty sample");
  if (grid.n < 2 || !(grid.hi > grid.lo)) throw std::invalid_argument("kde_marginal: bad grid");
  const double nd = static_cast<double>(sample.size());

  const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / nd;
  double var = 0.0;
  for (double x : sample) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / nd);

  std::vector<double> sorted = sample;
  std::sort(sorted.begin(), sorted.end());
  auto quantile = [&](double q) {
    const double pos = q * (nd - 1.0);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return (1.0 - w) * sorted[lo] + w * sorted[hi];
  };
  const double iqr = quantile(0.75) - quantile(0.25);

  double spread = std::min(sd, iqr / 1.34);
  if (spread <= 0.0) spread = std::max(sd, iqr / 1.34);
  double h = 0.9 * spread * std::pow(nd, -0.2);
  if (!(h > 0.0)) h = 1.0;  // degenerate sample: fall back to unit bandwidth

  DensityCurve out;
  out.x.resize(grid.n);
  out.f.resize(grid.n);
  const double norm = 1.0 / (nd * h * std::sqrt(2.0 * std::numbers::pi));
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.lo + (grid.hi - grid.lo) * static_cast<double>(i) /
                                   static_cast<double>(grid.n - 1);
    double f = 0.0;
    for (double s : sample) {
      const double z = (x - s) / h;
      f += std::exp(-0.5 * z * z);
    }
    out.x[i] = x;
    out.f[i] = f * norm;
  }
  return out;
}

double path_min_norm(const Skeleton& skel) {
  if (skel.size() == 0) throw std::invalid_argument("path_min_norm: empty skeleton");
  auto segment_min = [](const Vec& x, const Vec& v, double dt) {
    // min over s in [0, dt] of ||x + s v||.
    const double vv = v.squaredNorm();
    double s = vv > 0.0 ? std::clamp(-x.dot(v) / vv, 0.0, dt) : 0.0;
    return (x + s * v).norm();
  };
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < skel.size(); ++i) {
    const double t_end = i + 1 < skel.size() ? skel.times[i + 1] : std::max(skel.t_final, skel.times[i]);
    best = std::min(best, segment_min(skel.positions[i], skel.velocities[i], t_end - skel.times[i]));
  }
  return best;
}

CollinearityReport collinearity_check(const Skeleton& skel) {
  if (skel.size() < 2) throw std::invalid_argument("collinearity_check: need >= 2 events");
  const Vec& x0 = skel.positions[0];
  const double vn = skel.velocities[0].norm();
  if (!(vn > 0.0)) throw std::invalid_argument("collinearity_check: zero initial velocity");
  const Vec u = skel.velocities[0] / vn;

  CollinearityReport rep;
  double extent = 0.0;
  const auto measure = [&](const Vec& p) {
    const Vec r = p - x0;
    extent = std::max(extent, r.norm());
    const Vec perp = r - r.dot(u) * u;
    rep.max_deviation = std::max(rep.max_deviation, perp.norm());
  };
  for (std::size_t i = 1; i < skel.size(); ++i) measure(skel.positions[i]);
  // The final flight can turn off the line at the last event; the endpoint
  // catches that where event positions alone would not.
  if (skel.t_final > skel.times.back()) measure(skel.position_at(skel.t_final));
  rep.reducible = rep.max_deviation < 1e-6 * (1.0 + extent);
  return rep;
}

DiagnosticsReport diagnose_points(const std::vector<Vec>& pts, const TargetModel* reference,
                                  int w2_subsample, std::uint64_t seed) {
  if (pts.empty()) throw std::invalid_argument("diagnose_points: empty sample");
  DiagnosticsReport rep;
  rep.d = static_cast<int>(pts[0].size());
  rep.n = static_cast<long long>(pts.size());

  const Moments mom = moments(pts);
  for (int k = 0; k < rep.d; ++k) {
    rep.mean.push_back(mom.mean[k]);
    rep.se_mean.push_back(mom.se_mean[k]);
    rep.second_moment.push_back(mom.second_moment[k]);
    rep.se_second.push_back(mom.se_second[k]);
    // The raw estimator can exceed n under negative autocorrelation; the
    // report caps at the sample size.
    rep.ess_points.push_back(std::min(static_cast<double>(rep.n), mom.ess_mean[k]));
  }

  for (int k = 0; k < rep.d; ++k) {
    std::vector<double> comp(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) comp[i] = pts[i][k];
    const auto [lo, hi] = std::minmax_element(comp.begin(), comp.end());
    const double pad = 0.1 * std::max(1.0, *hi - *lo);
    rep.kde.push_back(kde_marginal(comp, GridSpec{*lo - pad, *hi + pad, 256}));
  }

  if (reference && reference->sample_exact) {
    RngStream ref_rng(mix_seed(seed, "diagnostics-reference"));
    std::vector<Vec> ref(pts.size());
    for (auto& r : ref) r = reference->sample_exact(ref_rng);
    for (int k = 0; k < rep.d; ++k) {
      std::vector<double> xs(pts.size()), rs(ref.size());
      for (std::size_t i = 0; i < pts.size(); ++i) xs[i] = pts[i][k];
      for (std::size_t i = 0; i < ref.size(); ++i) rs[i] = ref[i][k];
      rep.w2_marginal.push_back(wasserstein2_1d(std::move(xs), std::move(rs)));
    }
    if (rep.d == 2) rep.w2_2d = wasserstein2_2d(pts, ref, w2_subsample, seed);
  }
  return rep;
}

DiagnosticsReport diagnose_skeleton(const Skeleton& skel, const TargetModel* reference,
                                    int w2_subsample, std::uint64_t seed) {
  const long long n = std::max<long long>(1, static_cast<long long>(std::floor(skel.t_final)));
  DiagnosticsReport rep = diagnose_points(discretize_path(skel, n), reference, w2_subsample, seed);
  if (skel.size() >= 2) rep.reducibility = collinearity_check(skel);
  return rep;
}

}  // namespace pdmp
