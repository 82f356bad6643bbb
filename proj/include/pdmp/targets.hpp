// Target distributions: gradient oracles plus matched event clocks.
//
// Each target supplies grad log pi and a factory building the bounce clock
// for a ray x + t v.  Clocks are exact where the integrated rate inverts in
// closed form (isotropic Gaussian) and thinned against an analytic bound
// otherwise (Gaussian mixture, logistic regression).

#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>

#include <Eigen/Core>

#include "pdmp/clocks.hpp"
#include "pdmp/core.hpp"

namespace pdmp {

struct TargetModel {
  int d = 0;
  std::string name;
  std::function<Vec(const Vec&)> grad_log_density;
  // Clock for events along x + t v, t >= 0.
  std::function<ClockSpec(const Vec& x, const Vec& v)> event_clock;
  // Log density up to an additive constant; empty when unavailable.
  std::function<double(const Vec&)> log_density;
  // Exact sampler; empty when unavailable.
  std::function<Vec(RngStream&)> sample_exact;
};

// --- Isotropic standard Gaussian N(0, I_d). ---------------------------------

// grad log pi(x) = -x, so the bounce rate along the ray is
// max(0, <v,x> + t ||v||^2): an exact LinearClock.
LinearClock gaussian_clock(const Vec& x, const Vec& v);
TargetModel isotropic_gaussian_target(int d);

// --- Two-component planar Gaussian mixture. ---------------------------------

// pi = p N((m1x, m1y), diag(s1^2, s2^2)) + (1-p) N((m2x, m2y), diag(s3^2, s4^2))
struct MixtureParams {
  double p = 0.5;
  double s1 = 1.0, s2 = 1.5, s3 = 2.0, s4 = 1.0;
  double m1x = 3.0, m1y = 0.0;
  double m2x = 0.0, m2y = 3.0;
};

Vec mixture_grad(const MixtureParams& mp, const Vec& x);
double mixture_log_density(const MixtureParams& mp, const Vec& x);
// Marginal density of component k (0 or 1, meaning x1 or x2) at u.
double mixture_marginal_density(const MixtureParams& mp, int k, double u);

// ||grad log pi|| is dominated coordinatewise by the four distances to the
// component centers, so the bounce rate is thinned against a superposition of
// four AbsLinearClocks, each scaled by ||v||.
ClockSpec mixture_clock(const MixtureParams& mp, const Vec& x, const Vec& v);
TargetModel gaussian_mixture_target(const MixtureParams& mp);

// --- Bayesian logistic regression, flat prior. -------------------------------

// Covariate rows y_j in R^d, labels z_j in {0,1}; log posterior
//   sum_j [ z_j <y_j, x> - log(1 + exp<y_j, x>) ].
struct LogisticModel {
  Eigen::MatrixXd y;        // n x d
  Eigen::VectorXi z;        // n labels in {0,1}
  int subsample_size = 10;  // carried as run metadata; the event kernel draws single indices
  Vec col_max_abs;          // per-coordinate max_j |y_jk|, set by finalize()

  int d() const { return static_cast<int>(y.cols()); }
  int n() const { return static_cast<int>(y.rows()); }
  void finalize();  // recompute col_max_abs; call after filling y
};

double sigmoid(double s);

// Full-data score: sum_j (z_j - sigmoid(<y_j, x>)) y_j.
Vec logistic_grad(const LogisticModel& m, const Vec& x);
// Single-observation estimator n * (z_i - sigmoid(<y_i, x>)) y_i, unbiased
// for the full score under a uniform index.
Vec logistic_grad_subsampled(const LogisticModel& m, const Vec& x, int index);
double logistic_log_density(const LogisticModel& m, const Vec& x);

// Global bound on the subsampled bounce rate for a fixed velocity:
//   max(0, -<v, Delta>) <= n * sum_k |v_k| max_j |y_jk|.
double logistic_bound(const LogisticModel& m, const Vec& v);

LogisticModel generate_logistic_data(int d, int n, const Vec& x_true, RngStream& rng);

// CSV with header y1,...,yd,z; one observation per row.
void write_logistic_csv(const LogisticModel& m, std::ostream& os);
LogisticModel read_logistic_csv(std::istream& is);

// Full-gradient target over the same posterior; the clock thins the exact
// bounce rate against the constant logistic_bound.
TargetModel logistic_target(std::shared_ptr<const LogisticModel> m);

}  // namespace pdmp
