#include "pdmp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "pdmp/analysis.hpp"
#include "pdmp/format.hpp"
#include "pdmp/skeleton_io.hpp"

namespace pdmp {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kExperiments = {"gauss-reducibility", "gauss-sweep", "mixture",
                                               "logistic"};

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for write: " + p.string());
  os << content;
  if (!os) throw std::runtime_error("write failed: " + p.string());
}

std::string read_file(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for read: " + p.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string rep_tag(int rep) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "rep%03d", rep);
  return buf;
}

struct CellTask {
  CellOutcome proto;
  std::function<void(CellOutcome&)> work;
};

void write_skeleton_bundle(const fs::path& dir, const Skeleton& skel) {
  std::ostringstream csv;
  write_skeleton_csv(skel, csv);
  write_file(dir / "skeleton.csv", csv.str());
  write_file(dir / "meta.json", skeleton_meta_json(skel).dump(2) + "\n");
}

void write_diagnostics(const fs::path& dir, const DiagnosticsReport& rep) {
  write_file(dir / "diagnostics.json", diagnostics_json(rep).dump(2) + "\n");
}

void put_moment_metrics(CellOutcome& out, const DiagnosticsReport& rep) {
  for (int k = 0; k < rep.d; ++k) {
    const std::string suffix = "_x" + std::to_string(k + 1);
    out.metrics["mean" + suffix] = rep.mean[k];
    out.metrics["se_mean" + suffix] = rep.se_mean[k];
    out.metrics["second" + suffix] = rep.second_moment[k];
    out.metrics["se_second" + suffix] = rep.se_second[k];
    out.metrics["ess" + suffix] = rep.ess_points[k];
    if (k < static_cast<int>(rep.w2_marginal.size())) {
      out.metrics["w2" + suffix] = rep.w2_marginal[k];
    }
  }
  if (rep.w2_2d) out.metrics["w2_2d"] = *rep.w2_2d;
}

// Wide per-metric table: one column per sampler label, one row per replication.
void write_metric_table(const fs::path& path, const std::vector<CellOutcome>& cells,
                        const std::vector<std::string>& samplers, int reps,
                        const std::string& key) {
  std::ostringstream os;
  for (std::size_t i = 0; i < samplers.size(); ++i) {
    os << (i ? "," : "") << samplers[i];
  }
  os << "\n";
  for (int r = 0; r < reps; ++r) {
    for (std::size_t i = 0; i < samplers.size(); ++i) {
      if (i) os << ",";
      for (const auto& c : cells) {
        if (c.sampler == samplers[i] && c.rep == r && c.status == "ok") {
          auto it = c.metrics.find(key);
          if (it != c.metrics.end()) os << format_double(it->second);
          break;
        }
      }
    }
    os << "\n";
  }
  write_file(path, os.str());
}

struct MixtureTruth {
  double mean[2];
  double second[2];
};

MixtureTruth mixture_truth(const MixtureParams& mp) {
  MixtureTruth t;
  t.mean[0] = mp.p * mp.m1x + (1.0 - mp.p) * mp.m2x;
  t.mean[1] = mp.p * mp.m1y + (1.0 - mp.p) * mp.m2y;
  t.second[0] = mp.p * (mp.m1x * mp.m1x + mp.s1 * mp.s1) +
                (1.0 - mp.p) * (mp.m2x * mp.m2x + mp.s3 * mp.s3);
  t.second[1] = mp.p * (mp.m1y * mp.m1y + mp.s2 * mp.s2) +
                (1.0 - mp.p) * (mp.m2y * mp.m2y + mp.s4 * mp.s4);
  return t;
}

}  // namespace

std::uint64_t derive_cell_seed(std::uint64_t master, const std::string& experiment,
                               const std::string& sampler, int rep) {
  std::uint64_t h = mix_seed(master, experiment);
  h = mix_seed(h, sampler);
  return mix_seed(h, static_cast<std::uint64_t>(rep));
}

ExperimentSpec parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: top level must be a JSON object");
  static const std::vector<std::string> known = {
      "experiment", "replications", "master_seed", "out_dir", "path_length",
      "lambda_refs", "mixture",      "logistic",    "workers", "smoke"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::invalid_argument("config: unknown field '" + key + "'");
    }
  }

  ExperimentSpec spec;
  if (!j.contains("experiment") || !j["experiment"].is_string()) {
    throw std::invalid_argument("config: 'experiment' (string) is required");
  }
  spec.experiment = j["experiment"].get<std::string>();
  if (std::find(kExperiments.begin(), kExperiments.end(), spec.experiment) == kExperiments.end()) {
    throw std::invalid_argument("config: unknown experiment '" + spec.experiment + "'");
  }

  spec.lambda_refs.clear();  // resolve_spec fills experiment defaults when left empty
  if (j.contains("replications")) {
    spec.replications = j["replications"].get<int>();
    if (spec.replications < 1) throw std::invalid_argument("config: 'replications' must be >= 1");
  }
  if (j.contains("master_seed")) spec.master_seed = j["master_seed"].get<std::uint64_t>();
  if (j.contains("out_dir")) spec.out_dir = j["out_dir"].get<std::string>();
  if (j.contains("path_length")) {
    spec.path_length = j["path_length"].get<double>();
    if (!(spec.path_length > 0)) throw std::invalid_argument("config: 'path_length' must be > 0");
  }
  if (j.contains("lambda_refs")) {
    spec.lambda_refs = j["lambda_refs"].get<std::vector<double>>();
    if (spec.lambda_refs.empty()) throw std::invalid_argument("config: 'lambda_refs' is empty");
    for (double l : spec.lambda_refs) {
      if (l < 0) throw std::invalid_argument("config: 'lambda_refs' entries must be >= 0");
    }
  }
  if (j.contains("mixture")) {
    const auto& m = j["mixture"];
    spec.mixture.p = m.value("p", spec.mixture.p);
    if (m.contains("sigmas")) {
      const auto s = m["sigmas"].get<std::vector<double>>();
      if (s.size() != 4) throw std::invalid_argument("config: 'mixture.sigmas' needs 4 entries");
      spec.mixture.s1 = s[0];
      spec.mixture.s2 = s[1];
      spec.mixture.s3 = s[2];
      spec.mixture.s4 = s[3];
    }
    if (!(spec.mixture.p > 0 && spec.mixture.p < 1)) {
      throw std::invalid_argument("config: 'mixture.p' must be in (0,1)");
    }
    if (!(spec.mixture.s1 > 0 && spec.mixture.s2 > 0 && spec.mixture.s3 > 0 &&
          spec.mixture.s4 > 0)) {
      throw std::invalid_argument("config: 'mixture.sigmas' must be positive");
    }
  }
  if (j.contains("logistic")) {
    const auto& l = j["logistic"];
    spec.logistic.d = l.value("d", spec.logistic.d);
    spec.logistic.n_obs = l.value("n_obs", spec.logistic.n_obs);
    spec.logistic.subsample_size = l.value("subsample_size", spec.logistic.subsample_size);
    spec.logistic.mh_iterations = l.value("mh_iterations", spec.logistic.mh_iterations);
    spec.logistic.mh_burn_frac = l.value("mh_burn_frac", spec.logistic.mh_burn_frac);
    if (spec.logistic.d < 1) throw std::invalid_argument("config: 'logistic.d' must be >= 1");
    if (spec.logistic.n_obs < 1) throw std::invalid_argument("config: 'logistic.n_obs' must be >= 1");
    if (spec.logistic.subsample_size < 1) {
      throw std::invalid_argument("config: 'logistic.subsample_size' must be >= 1");
    }
    if (spec.logistic.mh_iterations < 100) {
      throw std::invalid_argument("config: 'logistic.mh_iterations' must be >= 100");
    }
    if (!(spec.logistic.mh_burn_frac >= 0 && spec.logistic.mh_burn_frac < 1)) {
      throw std::invalid_argument("config: 'logistic.mh_burn_frac' must be in [0,1)");
    }
  }
  if (j.contains("workers")) {
    spec.workers = j["workers"].get<int>();
    if (spec.workers < 1) throw std::invalid_argument("config: 'workers' must be >= 1");
  }
  if (j.contains("smoke")) spec.smoke = j["smoke"].get<bool>();
  return spec;
}

ExperimentSpec load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("config: cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return parse_config(j);
}

ExperimentSpec resolve_spec(ExperimentSpec spec) {
  if (std::find(kExperiments.begin(), kExperiments.end(), spec.experiment) == kExperiments.end()) {
    throw std::invalid_argument("unknown experiment '" + spec.experiment + "'");
  }
  if (spec.replications == 0) {
    if (spec.experiment == "gauss-sweep" || spec.experiment == "mixture") {
      spec.replications = 50;
    } else {
      spec.replications = 1;
    }
  }
  if (spec.path_length == 0) {
    spec.path_length = spec.experiment == "gauss-reducibility" ? 1000.0 : 10000.0;
  }
  if (spec.lambda_refs.empty()) {
    spec.lambda_refs =
        spec.experiment == "mixture" ? std::vector<double>{0.01, 0.1, 1.0}
                                     : std::vector<double>{0.01, 0.1, 0.2, 0.5, 1.0};
  }
  if (spec.out_dir.empty()) spec.out_dir = "results/" + spec.experiment;
  if (spec.smoke) {
    spec.path_length = std::max(10.0, spec.path_length / 10.0);
    spec.replications = std::max(1, spec.replications / 10);
    spec.logistic.mh_iterations = std::max<long long>(1000, spec.logistic.mh_iterations / 10);
  }
  return spec;
}

namespace {

std::vector<CellTask> build_gauss_reducibility(const ExperimentSpec& spec, const fs::path& out) {
  struct Setup {
    const char* id;
    bool gbps;
    double x0;
  };
  const Setup setups[] = {{"bps_mode", false, 0.0},
                          {"bps_offmode", false, 3.0},
                          {"gbps_mode", true, 0.0},
                          {"gbps_offmode", true, 3.0}};
  std::vector<CellTask> tasks;
  for (const auto& s : setups) {
    for (int r = 0; r < spec.replications; ++r) {
      CellTask task;
      task.proto.sampler = s.id;
      task.proto.rep = r;
      task.proto.id = std::string(s.id) + "_" + rep_tag(r);
      const std::uint64_t seed = derive_cell_seed(spec.master_seed, spec.experiment, s.id, r);
      task.proto.seed = seed;
      const fs::path dir = out / "runs" / task.proto.id;
      const bool gbps = s.gbps;
      const double x0v = s.x0;
      const double path = spec.path_length;
      task.work = [dir, seed, gbps, x0v, path](CellOutcome& cell) {
        fs::create_directories(dir);
        const TargetModel target = isotropic_gaussian_target(2);
        RunConfig rc;
        rc.path_length = path;
        rc.lambda_ref = 0.0;
        rc.seed = seed;
        rc.x0 = Vec::Constant(2, x0v);
        const Skeleton skel = gbps ? run_gbps(target, rc) : run_bps(target, rc);
        write_skeleton_bundle(dir, skel);
        const DiagnosticsReport rep = diagnose_skeleton(skel, &target, 500, seed);
        write_diagnostics(dir, rep);
        put_moment_metrics(cell, rep);
        cell.metrics["reducible"] = rep.reducibility.reducible ? 1.0 : 0.0;
        cell.metrics["max_deviation"] = rep.reducibility.max_deviation;
        cell.metrics["min_radius"] = path_min_norm(skel);
        cell.metrics["n_events"] = static_cast<double>(skel.meta.n_events);
      };
      tasks.push_back(std::move(task));
    }
  }
  return tasks;
}

std::vector<CellTask> build_gauss_like(const ExperimentSpec& spec, const fs::path& out,
                                       bool is_mixture) {
  std::vector<std::string> samplers;
  for (double l : spec.lambda_refs) samplers.push_back("bps_" + format_double(l));
  samplers.push_back("gbps");

  std::vector<CellTask> tasks;
  for (std::size_t s = 0; s < samplers.size(); ++s) {
    const bool gbps = samplers[s] == "gbps";
    const double lref = gbps ? 0.0 : spec.lambda_refs[s];
    for (int r = 0; r < spec.replications; ++r) {
      CellTask task;
      task.proto.sampler = samplers[s];
      task.proto.rep = r;
      task.proto.id = samplers[s] + "_" + rep_tag(r);
      const std::uint64_t seed =
          derive_cell_seed(spec.master_seed, spec.experiment, samplers[s], r);
      task.proto.seed = seed;
      const fs::path dir = out / "runs" / task.proto.id;
      const double path = spec.path_length;
      const MixtureParams mp = spec.mixture;
      task.work = [dir, seed, gbps, lref, path, mp, is_mixture](CellOutcome& cell) {
        fs::create_directories(dir);
        const TargetModel target =
            is_mixture ? gaussian_mixture_target(mp) : isotropic_gaussian_target(2);
        RunConfig rc;
        rc.path_length = path;
        rc.lambda_ref = lref;
        rc.seed = seed;
        const Skeleton skel = gbps ? run_gbps(target, rc) : run_bps(target, rc);
        write_skeleton_bundle(dir, skel);
        const DiagnosticsReport rep = diagnose_skeleton(skel, &target, 500, seed);
        write_diagnostics(dir, rep);
        put_moment_metrics(cell, rep);
        cell.metrics["n_events"] = static_cast<double>(skel.meta.n_events);

        double true_mean[2] = {0.0, 0.0};
        double true_second[2] = {1.0, 1.0};
        if (is_mixture) {
          const MixtureTruth t = mixture_truth(mp);
          true_mean[0] = t.mean[0];
          true_mean[1] = t.mean[1];
          true_second[0] = t.second[0];
          true_second[1] = t.second[1];
        }
        for (int k = 0; k < 2; ++k) {
          const std::string suffix = "_x" + std::to_string(k + 1);
          cell.metrics["err_mean" + suffix] = std::abs(rep.mean[k] - true_mean[k]);
          cell.metrics["err_second" + suffix] = std::abs(rep.second_moment[k] - true_second[k]);
        }
        if (is_mixture) {
          // Fixed-grid marginal KDE with the analytic density for overlay.
          const auto pts = discretize_path(
              skel, std::max<long long>(1, static_cast<long long>(std::floor(skel.t_final))));
          for (int k = 0; k < 2; ++k) {
            std::vector<double> comp(pts.size());
            for (std::size_t i = 0; i < pts.size(); ++i) comp[i] = pts[i][k];
            const DensityCurve curve = kde_marginal(comp, GridSpec{-6.0, 9.0, 301});
            double sup = 0.0;
            std::ostringstream os;
            os << "x,density,reference\n";
            for (std::size_t i = 0; i < curve.x.size(); ++i) {
              const double ref = mixture_marginal_density(mp, k, curve.x[i]);
              sup = std::max(sup, std::abs(curve.f[i] - ref));
              os << format_double(curve.x[i]) << "," << format_double(curve.f[i]) << ","
                 << format_double(ref) << "\n";
            }
            write_file(dir / ("kde_x" + std::to_string(k + 1) + ".csv"), os.str());
            cell.metrics["kde_sup_x" + std::to_string(k + 1)] = sup;
          }
        }
      };
      tasks.push_back(std::move(task));
    }
  }
  return tasks;
}

std::vector<CellTask> build_logistic(const ExperimentSpec& spec, const fs::path& out) {
  // One dataset per experiment, shared by every cell.
  RngStream data_rng(mix_seed(spec.master_seed, "logistic-data"));
  const Vec x_true = data_rng.standard_normal(spec.logistic.d);
  auto model = std::make_shared<LogisticModel>(
      generate_logistic_data(spec.logistic.d, spec.logistic.n_obs, x_true, data_rng));
  model->subsample_size = spec.logistic.subsample_size;

  {
    std::ostringstream os;
    write_logistic_csv(*model, os);
    fs::create_directories(out);
    write_file(out / "dataset.csv", os.str());
    nlohmann::ordered_json meta;
    meta["d"] = spec.logistic.d;
    meta["n_obs"] = spec.logistic.n_obs;
    meta["subsample_size"] = spec.logistic.subsample_size;
    meta["x_true"] = std::vector<double>(x_true.data(), x_true.data() + x_true.size());
    write_file(out / "dataset_meta.json", meta.dump(2) + "\n");
  }

  auto write_kde_files = [](const fs::path& dir, const std::vector<Vec>& pts, int d) {
    for (int k = 0; k < d; ++k) {
      std::vector<double> comp(pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i) comp[i] = pts[i][k];
      const auto [lo, hi] = std::minmax_element(comp.begin(), comp.end());
      const double pad = 0.1 * std::max(1.0, *hi - *lo);
      const DensityCurve curve = kde_marginal(comp, GridSpec{*lo - pad, *hi + pad, 301});
      std::ostringstream os;
      os << "x,density\n";
      for (std::size_t i = 0; i < curve.x.size(); ++i) {
        os << format_double(curve.x[i]) << "," << format_double(curve.f[i]) << "\n";
      }
      write_file(dir / ("kde_x" + std::to_string(k + 1) + ".csv"), os.str());
    }
  };

  std::vector<CellTask> tasks;
  for (int r = 0; r < spec.replications; ++r) {
    {
      CellTask task;
      task.proto.sampler = "gbps_ss";
      task.proto.rep = r;
      task.proto.id = "gbps_ss_" + rep_tag(r);
      const std::uint64_t seed = derive_cell_seed(spec.master_seed, spec.experiment, "gbps_ss", r);
      task.proto.seed = seed;
      const fs::path dir = out / "runs" / task.proto.id;
      const double path = spec.path_length;
      task.work = [dir, seed, path, model, write_kde_files](CellOutcome& cell) {
        fs::create_directories(dir);
        RunConfig rc;
        rc.path_length = path;
        rc.seed = seed;
        const Skeleton skel = run_gbps_subsampled(*model, rc);
        write_skeleton_bundle(dir, skel);
        const DiagnosticsReport rep = diagnose_skeleton(skel);
        write_diagnostics(dir, rep);
        put_moment_metrics(cell, rep);
        cell.metrics["n_events"] = static_cast<double>(skel.meta.n_events);
        cell.metrics["n_proposals"] = static_cast<double>(skel.meta.n_proposals);
        const auto pts = discretize_path(
            skel, std::max<long long>(1, static_cast<long long>(std::floor(skel.t_final))));
        write_kde_files(dir, pts, model->d());
      };
      tasks.push_back(std::move(task));
    }
    {
      CellTask task;
      task.proto.sampler = "mh";
      task.proto.rep = r;
      task.proto.id = "mh_" + rep_tag(r);
      const std::uint64_t seed = derive_cell_seed(spec.master_seed, spec.experiment, "mh", r);
      task.proto.seed = seed;
      const fs::path dir = out / "runs" / task.proto.id;
      const LogisticSettings ls = spec.logistic;
      task.work = [dir, seed, ls, model, write_kde_files](CellOutcome& cell) {
        fs::create_directories(dir);
        const TargetModel target = logistic_target(model);
        const Vec x0 = Vec::Zero(target.d);
        MHConfig mc;
        mc.step_scale = tune_mh_scale(target, x0, mix_seed(seed, "mh-pilot"));
        mc.iterations = ls.mh_iterations;
        mc.burn_in = static_cast<long long>(static_cast<double>(ls.mh_iterations) * ls.mh_burn_frac);
        mc.seed = seed;
        mc.x0 = x0;
        const MHResult res = run_mh(target, mc);
        const DiagnosticsReport rep = diagnose_points(res.samples);
        write_diagnostics(dir, rep);
        put_moment_metrics(cell, rep);
        cell.metrics["acceptance_rate"] = res.acceptance_rate;
        cell.metrics["step_scale"] = mc.step_scale;
        write_kde_files(dir, res.samples, target.d);
      };
      tasks.push_back(std::move(task));
    }
  }
  return tasks;
}

void write_aggregates(const ExperimentSpec& spec, const fs::path& out,
                      const std::vector<CellOutcome>& cells) {
  const fs::path agg = out / "aggregate";
  fs::create_directories(agg);

  if (spec.experiment == "gauss-reducibility") {
    std::ostringstream os;
    os << "cell,rep,reducible,max_deviation,min_radius,n_events\n";
    for (const auto& c : cells) {
      if (c.status != "ok") continue;
      os << c.sampler << "," << c.rep << "," << static_cast<int>(c.metrics.at("reducible")) << ","
         << format_double(c.metrics.at("max_deviation")) << ","
         << format_double(c.metrics.at("min_radius")) << ","
         << static_cast<long long>(c.metrics.at("n_events")) << "\n";
    }
    write_file(agg / "reducibility.csv", os.str());
    return;
  }

  if (spec.experiment == "gauss-sweep" || spec.experiment == "mixture") {
    std::vector<std::string> samplers;
    for (double l : spec.lambda_refs) samplers.push_back("bps_" + format_double(l));
    samplers.push_back("gbps");
    std::vector<std::string> keys = {"err_mean_x1", "err_mean_x2", "err_second_x1",
                                     "err_second_x2", "ess_x1",    "ess_x2",
                                     "w2_x1",        "w2_x2",      "w2_2d"};
    if (spec.experiment == "mixture") {
      keys.push_back("kde_sup_x1");
      keys.push_back("kde_sup_x2");
    }
    for (const auto& key : keys) {
      write_metric_table(agg / (key + ".csv"), cells, samplers, spec.replications, key);
    }
    return;
  }

  // logistic: posterior-mean agreement between the subsampled chain and MH.
  std::ostringstream os;
  os << "rep,component,mean_gbps_ss,se_gbps_ss,mean_mh,se_mh,within_3se\n";
  for (int r = 0; r < spec.replications; ++r) {
    const CellOutcome* g = nullptr;
    const CellOutcome* m = nullptr;
    for (const auto& c : cells) {
      if (c.rep != r || c.status != "ok") continue;
      if (c.sampler == "gbps_ss") g = &c;
      if (c.sampler == "mh") m = &c;
    }
    if (!g || !m) continue;
    for (int k = 1; k <= spec.logistic.d; ++k) {
      const std::string suffix = "_x" + std::to_string(k);
      const double mg = g->metrics.at("mean" + suffix);
      const double sg = g->metrics.at("se_mean" + suffix);
      const double mm = m->metrics.at("mean" + suffix);
      const double sm = m->metrics.at("se_mean" + suffix);
      const bool within = std::abs(mg - mm) <= 3.0 * std::sqrt(sg * sg + sm * sm);
      os << r << "," << k << "," << format_double(mg) << "," << format_double(sg) << ","
         << format_double(mm) << "," << format_double(sm) << "," << (within ? 1 : 0) << "\n";
    }
  }
  write_file(agg / "posterior_agreement.csv", os.str());
}

nlohmann::ordered_json settings_json(const ExperimentSpec& spec) {
  nlohmann::ordered_json s;
  s["experiment"] = spec.experiment;
  s["replications"] = spec.replications;
  s["master_seed"] = spec.master_seed;
  s["out_dir"] = spec.out_dir;
  s["path_length"] = spec.path_length;
  s["lambda_refs"] = spec.lambda_refs;
  s["mixture"] = {{"p", spec.mixture.p},
                  {"sigmas", {spec.mixture.s1, spec.mixture.s2, spec.mixture.s3, spec.mixture.s4}},
                  {"centers", {{spec.mixture.m1x, spec.mixture.m1y}, {spec.mixture.m2x, spec.mixture.m2y}}}};
  s["logistic"] = {{"d", spec.logistic.d},
                   {"n_obs", spec.logistic.n_obs},
                   {"subsample_size", spec.logistic.subsample_size},
                   {"mh_iterations", spec.logistic.mh_iterations},
                   {"mh_burn_frac", spec.logistic.mh_burn_frac}};
  s["workers"] = spec.workers;
  s["smoke"] = spec.smoke;
  return s;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& raw) {
  const ExperimentSpec spec = resolve_spec(raw);
  const fs::path out(spec.out_dir);
  fs::create_directories(out / "runs");

  std::vector<CellTask> tasks;
  if (spec.experiment == "gauss-reducibility") {
    tasks = build_gauss_reducibility(spec, out);
  } else if (spec.experiment == "gauss-sweep") {
    tasks = build_gauss_like(spec, out, false);
  } else if (spec.experiment == "mixture") {
    tasks = build_gauss_like(spec, out, true);
  } else {
    tasks = build_logistic(spec, out);
  }

  std::vector<CellOutcome> outcomes;
  outcomes.reserve(tasks.size());
  for (const auto& t : tasks) outcomes.push_back(t.proto);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
      const auto t0 = std::chrono::steady_clock::now();
      try {
        tasks[i].work(outcomes[i]);
      } catch (const std::exception& e) {
        outcomes[i].status = std::string("error: ") + e.what();
      }
      outcomes[i].runtime_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  const int n_threads = std::max(1, std::min<int>(spec.workers, static_cast<int>(tasks.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  ExperimentResult result;
  result.out_dir = spec.out_dir;
  result.cells = outcomes;
  for (const auto& c : outcomes) result.partial |= c.status != "ok";

  try {
    write_aggregates(spec, out, outcomes);
  } catch (const std::exception& e) {
    result.partial = true;
    CellOutcome agg;
    agg.id = "aggregate";
    agg.status = std::string("error: ") + e.what();
    result.cells.push_back(agg);
  }

  nlohmann::ordered_json manifest;
  manifest["settings"] = settings_json(spec);
  manifest["partial"] = result.partial;
  manifest["notes"] = {"paths start at the configured initial point; no burn-in is discarded",
                       "the MH baseline discards its configured burn-in fraction"};
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const auto& c : result.cells) {
    nlohmann::ordered_json cj;
    cj["id"] = c.id;
    cj["sampler"] = c.sampler;
    cj["rep"] = c.rep;
    cj["seed"] = c.seed;
    cj["status"] = c.status;
    cj["runtime_s"] = c.runtime_s;
    cells.push_back(std::move(cj));
  }
  manifest["cells"] = std::move(cells);

  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(out)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().filename() == "manifest.json") continue;
    files.push_back(fs::relative(entry.path(), out));
  }
  std::sort(files.begin(), files.end());
  nlohmann::ordered_json flist = nlohmann::ordered_json::array();
  for (const auto& f : files) {
    const std::string bytes = read_file(out / f);
    nlohmann::ordered_json fj;
    fj["path"] = f.generic_string();
    fj["bytes"] = bytes.size();
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    fj["fnv64"] = hex;
    flist.push_back(std::move(fj));
  }
  manifest["files"] = std::move(flist);
  write_file(out / "manifest.json", manifest.dump(2) + "\n");

  return result;
}

}  // namespace pdmp
