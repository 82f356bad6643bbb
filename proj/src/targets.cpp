#include "pdmp/targets.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "pdmp/format.hpp"

namespace pdmp {

namespace {

void check_dim(const Vec& x, int d, const char* where) {
  if (x.size() != d) throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

}  // namespace

// --- Isotropic Gaussian ------------------------------------------------------

LinearClock gaussian_clock(const Vec& x, const Vec& v) {
  if (x.size() != v.size() || x.size() == 0) {
    throw std::invalid_argument("gaussian_clock: dimension mismatch");
  }
  // rate(t) = max(0, -<v, -(x + t v)>) = max(0, <v,x> + t <v,v>).
  return LinearClock{v.dot(x), v.squaredNorm()};
}

TargetModel isotropic_gaussian_target(int d) {
  if (d < 1) throw std::invalid_argument("isotropic_gaussian_target: d must be >= 1");
  TargetModel t;
  t.d = d;
  t.name = "gauss-iso";
  t.grad_log_density = [d](const Vec& x) -> Vec {
    check_dim(x, d, "gauss grad");
    return -x;
  };
  t.event_clock = [](const Vec& x, const Vec& v) -> ClockSpec { return gaussian_clock(x, v); };
  t.log_density = [d](const Vec& x) {
    check_dim(x, d, "gauss log_density");
    return -0.5 * x.squaredNorm();
  };
  t.sample_exact = [d](RngStream& rng) { return rng.standard_normal(d); };
  return t;
}

// --- Gaussian mixture ---------------------------------------------------------

namespace {

// Component responsibilities r1, r2 (normalized within the pair) and the
// shared log density, computed through a log-sum-exp shift.
struct MixtureEval {
  double r1, r2, logpi;
};

MixtureEval mixture_eval(const MixtureParams& mp, const Vec& x) {
  const double two_pi = 2.0 * std::numbers::pi;
  const double a1 = std::log(mp.p) - std::log(two_pi * mp.s1 * mp.s2) -
                    0.5 * ((x[0] - mp.m1x) * (x[0] - mp.m1x) / (mp.s1 * mp.s1) +
                           (x[1] - mp.m1y) * (x[1] - mp.m1y) / (mp.s2 * mp.s2));
  const double a2 = std::log(1.0 - mp.p) - std::log(two_pi * mp.s3 * mp.s4) -
                    0.5 * ((x[0] - mp.m2x) * (x[0] - mp.m2x) / (mp.s3 * mp.s3) +
                           (x[1] - mp.m2y) * (x[1] - mp.m2y) / (mp.s4 * mp.s4));
  const double m = std::max(a1, a2);
  const double e1 = std::exp(a1 - m);
  const double e2 = std::exp(a2 - m);
  return {e1 / (e1 + e2), e2 / (e1 + e2), m + std::log(e1 + e2)};
}

double normal_pdf(double u, double mean, double sd) {
  const double z = (u - mean) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace

Vec mixture_grad(const MixtureParams& mp, const Vec& x) {
  check_dim(x, 2, "mixture_grad");
  const MixtureEval e = mixture_eval(mp, x);
  Vec g(2);
  g[0] = e.r1 * (-(x[0] - mp.m1x) / (mp.s1 * mp.s1)) + e.r2 * (-(x[0] - mp.m2x) / (mp.s3 * mp.s3));
  g[1] = e.r1 * (-(x[1] - mp.m1y) / (mp.s2 * mp.s2)) + e.r2 * (-(x[1] - mp.m2y) / (mp.s4 * mp.s4));
  return g;
}

double mixture_log_density(const MixtureParams& mp, const Vec& x) {
  check_dim(x, 2, "mixture_log_density");
  return mixture_eval(mp, x).logpi;
}

double mixture_marginal_density(const MixtureParams& mp, int k, double u) {
  if (k == 0) {
    return mp.p * normal_pdf(u, mp.m1x, mp.s1) + (1.0 - mp.p) * normal_pdf(u, mp.m2x, mp.s3);
  }
  if (k == 1) {
    return mp.p * normal_pdf(u, mp.m1y, mp.s2) + (1.0 - mp.p) * normal_pdf(u, mp.m2y, mp.s4);
  }
  throw std::invalid_argument("mixture_marginal_density: component must be 0 or 1");
}

ClockSpec mixture_clock(const MixtureParams& mp, const Vec& x, const Vec& v) {
  check_dim(x, 2, "mixture_clock");
  check_dim(v, 2, "mixture_clock");
  const double vn = v.norm();
  // ||grad log pi|| is a convex combination of the two component gradients, so
  //   lambda(t) <= ||v|| ( |x1-m1x|/s1^2 + |x2-m1y|/s2^2 + |x1-m2x|/s3^2 + |x2-m2y|/s4^2 )
  // along the ray, each term an AbsLinearClock in the matching coordinate.
  SuperpositionClock bound;
  bound.parts.push_back(AbsLinearClock{x[0], v[0], mp.m1x, mp.s1, vn});
  bound.parts.push_back(AbsLinearClock{x[1], v[1], mp.m1y, mp.s2, vn});
  bound.parts.push_back(AbsLinearClock{x[0], v[0], mp.m2x, mp.s3, vn});
  bound.parts.push_back(AbsLinearClock{x[1], v[1], mp.m2y, mp.s4, vn});

  ThinnedClock tc;
  tc.bound = std::make_shared<const ClockSpec>(std::move(bound));
  tc.true_rate = [mp, x, v](double t) {
    const Vec p = x + t * v;
    return event_rate(v, mixture_grad(mp, p));
  };
  return tc;
}

TargetModel gaussian_mixture_target(const MixtureParams& mp) {
  if (!(mp.p > 0.0 && mp.p < 1.0) || !(mp.s1 > 0 && mp.s2 > 0 && mp.s3 > 0 && mp.s4 > 0)) {
    throw std::invalid_argument("gaussian_mixture_target: invalid parameters");
  }
  TargetModel t;
  t.d = 2;
  t.name = "gauss-mix2";
  t.grad_log_density = [mp](const Vec& x) { return mixture_grad(mp, x); };
  t.event_clock = [mp](const Vec& x, const Vec& v) { return mixture_clock(mp, x, v); };
  t.log_density = [mp](const Vec& x) { return mixture_log_density(mp, x); };
  t.sample_exact = [mp](RngStream& rng) -> Vec {
    Vec s(2);
    if (rng.uniform() <= mp.p) {
      s[0] = mp.m1x + mp.s1 * rng.normal();
      s[1] = mp.m1y + mp.s2 * rng.normal();
    } else {
      s[0] = mp.m2x + mp.s3 * rng.normal();
      s[1] = mp.m2y + mp.s4 * rng.normal();
    }
    return s;
  };
  return t;
}

// --- Logistic regression ------------------------------------------------------

double sigmoid(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

void LogisticModel::finalize() {
  col_max_abs = y.cwiseAbs().colwise().maxCoeff().transpose();
}

Vec logistic_grad(const LogisticModel& m, const Vec& x) {
  check_dim(x, m.d(), "logistic_grad");
  Vec g = Vec::Zero(m.d());
  for (int j = 0; j < m.n(); ++j) {
    const double s = m.y.row(j).dot(x);
    g += (static_cast<double>(m.z[j]) - sigmoid(s)) * m.y.row(j).transpose();
  }
  return g;
}

Vec logistic_grad_subsampled(const LogisticModel& m, const Vec& x, int index) {
  check_dim(x, m.d(), "logistic_grad_subsampled");
  if (index < 0 || index >= m.n()) {
    throw std::invalid_argument("logistic_grad_subsampled: index out of range");
  }
  const double s = m.y.row(index).dot(x);
  return static_cast<double>(m.n()) * (static_cast<double>(m.z[index]) - sigmoid(s)) *
         m.y.row(index).transpose();
}

double logistic_log_density(const LogisticModel& m, const Vec& x) {
  check_dim(x, m.d(), "logistic_log_density");
  double lp = 0.0;
  for (int j = 0; j < m.n(); ++j) {
    const double s = m.y.row(j).dot(x);
    // log(1 + exp(s)) without overflow.
    const double log1pexp = s > 0.0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
    lp += static_cast<double>(m.z[j]) * s - log1pexp;
  }
  return lp;
}

double logistic_bound(const LogisticModel& m, const Vec& v) {
  check_dim(v, m.d(), "logistic_bound");
  if (m.col_max_abs.size() != m.d()) {
    throw std::invalid_argument("logistic_bound: model not finalized");
  }
  // |<v, Delta>| <= n sum_k |v_k| max_j |y_jk| for every observation index,
  // since |z - sigmoid| <= 1.
  return static_cast<double>(m.n()) * v.cwiseAbs().dot(m.col_max_abs);
}

LogisticModel generate_logistic_data(int d, int n, const Vec& x_true, RngStream& rng) {
  if (d < 1 || n < 1) throw std::invalid_argument("generate_logistic_data: d, n must be >= 1");
  check_dim(x_true, d, "generate_logistic_data");
  LogisticModel m;
  m.y.resize(n, d);
  m.z.resize(n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < d; ++k) m.y(j, k) = rng.normal();
    const double prob = sigmoid(m.y.row(j).dot(x_true));
    m.z[j] = rng.uniform() <= prob ? 1 : 0;
  }
  m.finalize();
  return m;
}

void write_logistic_csv(const LogisticModel& m, std::ostream& os) {
  for (int k = 0; k < m.d(); ++k) os << "y" << (k + 1) << ",";
  os << "z\n";
  for (int j = 0; j < m.n(); ++j) {
    for (int k = 0; k < m.d(); ++k) os << format_double(m.y(j, k)) << ",";
    os << m.z[j] << "\n";
  }
}

LogisticModel read_logistic_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("read_logistic_csv: empty input");
  int d = 0;
  {
    std::stringstream hs(line);
    std::string field;
    while (std::getline(hs, field, ',')) {
      if (field == "z") break;
      ++d;
    }
  }
  if (d < 1) throw std::invalid_argument("read_logistic_csv: malformed header");
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string field;
    std::vector<double> row;
    for (int k = 0; k < d; ++k) {
      if (!std::getline(ls, field, ',')) {
        throw std::invalid_argument("read_logistic_csv: short row");
      }
      row.push_back(std::stod(field));
    }
    if (!std::getline(ls, field, ',')) {
      throw std::invalid_argument("read_logistic_csv: missing label");
    }
    const int z = std::stoi(field);
    if (z != 0 && z != 1) throw std::invalid_argument("read_logistic_csv: label must be 0 or 1");
    rows.push_back(std::move(row));
    labels.push_back(z);
  }
  LogisticModel m;
  m.y.resize(static_cast<int>(rows.size()), d);
  m.z.resize(static_cast<int>(labels.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (int k = 0; k < d; ++k) m.y(static_cast<int>(j), k) = rows[j][k];
    m.z[static_cast<int>(j)] = labels[j];
  }
  m.finalize();
  return m;
}

TargetModel logistic_target(std::shared_ptr<const LogisticModel> m) {
  if (!m || m->n() < 1) throw std::invalid_argument("logistic_target: empty model");
  TargetModel t;
  t.d = m->d();
  t.name = "logistic";
  t.grad_log_density = [m](const Vec& x) { return logistic_grad(*m, x); };
  t.event_clock = [m](const Vec& x, const Vec& v) -> ClockSpec {
    ThinnedClock tc;
    tc.bound = std::make_shared<const ClockSpec>(ConstantClock{logistic_bound(*m, v)});
    tc.true_rate = [m, x, v](double t) {
      const Vec p = x + t * v;
      return event_rate(v, logistic_grad(*m, p));
    };
    return tc;
  };
  t.log_density = [m](const Vec& x) { return logistic_log_density(*m, x); };
  return t;
}

}  // namespace pdmp
