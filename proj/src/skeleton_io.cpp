#include "pdmp/skeleton_io.hpp"

#include <sstream>
#include <stdexcept>

#include "pdmp/format.hpp"

namespace pdmp {

void write_skeleton_csv(const Skeleton& skel, std::ostream& os) {
  if (skel.size() == 0 || skel.d == 0) {
    throw std::invalid_argument("write_skeleton_csv: empty skeleton");
  }
  os << "T";
  for (int k = 1; k <= skel.d; ++k) os << ",x" << k;
  for (int k = 1; k <= skel.d; ++k) os << ",v" << k;
  os << "\n";
  for (std::size_t i = 0; i < skel.size(); ++i) {
    os << format_double(skel.times[i]);
    for (int k = 0; k < skel.d; ++k) os << "," << format_double(skel.positions[i][k]);
    for (int k = 0; k < skel.d; ++k) os << "," << format_double(skel.velocities[i][k]);
    os << "\n";
  }
}

Skeleton read_skeleton_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("read_skeleton_csv: empty input");
  int cols = 1;
  for (char c : line) cols += c == ',';
  if (cols < 3 || (cols - 1) % 2 != 0) {
    throw std::invalid_argument("read_skeleton_csv: malformed header");
  }
  const int d = (cols - 1) / 2;

  Skeleton skel;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string field;
    if (!std::getline(ls, field, ',')) break;
    const double t = std::stod(field);
    Vec x(d), v(d);
    for (int k = 0; k < d; ++k) {
      if (!std::getline(ls, field, ',')) throw std::invalid_argument("read_skeleton_csv: short row");
      x[k] = std::stod(field);
    }
    for (int k = 0; k < d; ++k) {
      if (!std::getline(ls, field, ',')) throw std::invalid_argument("read_skeleton_csv: short row");
      v[k] = std::stod(field);
    }
    skel.add(t, std::move(x), std::move(v));
  }
  if (skel.size() == 0) throw std::invalid_argument("read_skeleton_csv: no events");
  skel.t_final = skel.times.back();
  skel.meta.n_events = static_cast<long long>(skel.size()) - 1;
  return skel;
}

nlohmann::ordered_json skeleton_meta_json(const Skeleton& skel) {
  nlohmann::ordered_json j;
  j["sampler"] = skel.meta.sampler;
  j["seed"] = skel.meta.seed;
  j["d"] = skel.d;
  j["t_final"] = skel.t_final;
  j["n_events"] = skel.meta.n_events;
  j["n_bounces"] = skel.meta.n_bounces;
  j["n_refreshes"] = skel.meta.n_refreshes;
  j["n_proposals"] = skel.meta.n_proposals;
  j["n_accepted"] = skel.meta.n_accepted;
  return j;
}

void apply_skeleton_meta(Skeleton& skel, const nlohmann::json& j) {
  skel.meta.sampler = j.value("sampler", skel.meta.sampler);
  skel.meta.seed = j.value("seed", skel.meta.seed);
  skel.t_final = j.value("t_final", skel.t_final);
  skel.meta.n_events = j.value("n_events", skel.meta.n_events);
  skel.meta.n_bounces = j.value("n_bounces", skel.meta.n_bounces);
  skel.meta.n_refreshes = j.value("n_refreshes", skel.meta.n_refreshes);
  skel.meta.n_proposals = j.value("n_proposals", skel.meta.n_proposals);
  skel.meta.n_accepted = j.value("n_accepted", skel.meta.n_accepted);
}

nlohmann::ordered_json diagnostics_json(const DiagnosticsReport& rep) {
  nlohmann::ordered_json j;
  j["d"] = rep.d;
  j["n"] = rep.n;
  j["mean"] = rep.mean;
  j["se_mean"] = rep.se_mean;
  j["second_moment"] = rep.second_moment;
  j["se_second"] = rep.se_second;
  j["ess"] = rep.ess_points;
  if (!rep.w2_marginal.empty()) j["w2_marginal"] = rep.w2_marginal;
  if (rep.w2_2d) j["w2_2d"] = *rep.w2_2d;
  j["reducible"] = rep.reducibility.reducible;
  j["max_line_deviation"] = rep.reducibility.max_deviation;
  nlohmann::ordered_json kdes = nlohmann::ordered_json::array();
  for (const auto& curve : rep.kde) {
    nlohmann::ordered_json c;
    c["x"] = curve.x;
    c["f"] = curve.f;
    kdes.push_back(std::move(c));
  }
  j["kde"] = std::move(kdes);
  return j;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace pdmp
