#include "bfseg/uam.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bfseg/parallel.hpp"

namespace bfseg {

using nlohmann::json;

namespace {

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log(p);
  if (p < 1.0) h -= (1.0 - p) * std::log1p(-p);
  return h;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void UamStats::validate() const {
  if (!std::isfinite(mean)) throw Error(ErrorKind::invalid_argument, "UAM mean must be finite");
  if (!(std >= 0.0) || !std::isfinite(std))
    throw Error(ErrorKind::invalid_argument, "UAM std must be finite and >= 0");
  if (n_cases < 1) throw Error(ErrorKind::invalid_argument, "UAM stats need n_cases >= 1");
  if (!(normal_threshold > 0.0 && normal_threshold < 1.0) ||
      !(outlier_threshold > 0.0 && outlier_threshold < 1.0))
    throw Error(ErrorKind::invalid_argument, "UAM thresholds must lie in (0, 1)");
  if (!(outlier_threshold < normal_threshold))
    throw Error(ErrorKind::invalid_argument,
                "UAM outlier threshold must be below the normal threshold");
  if (!(sigma_factor >= 0.0) || !std::isfinite(sigma_factor))
    throw Error(ErrorKind::invalid_argument, "UAM sigma factor must be finite and >= 0");
}

double entropy_sum(const Volume& prob) {
  require_kind(prob, Kind::probability, "entropy_sum");
  const auto p = prob.values();
  return deterministic_sum(p.size(), [&](std::size_t i) { return binary_entropy(double(p[i])); });
}

UamStats fit_population(const std::vector<double>& entropies) {
  if (entropies.size() < 2)
    throw Error(ErrorKind::empty_input, "UAM fit needs at least two cases, got " +
                                            std::to_string(entropies.size()));
  // order-independent: sum a sorted copy
  std::vector<double> sorted = entropies;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  const double mean = pairwise_sum(sorted) / n;
  std::vector<double> sq(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) sq[i] = (sorted[i] - mean) * (sorted[i] - mean);
  std::sort(sq.begin(), sq.end());
  UamStats stats;
  stats.mean = mean;
  stats.std = std::sqrt(pairwise_sum(sq) / n);
  stats.n_cases = sorted.size();
  return stats;
}

bool is_outlier(double entropy, const UamStats& stats) {
  const double limit = stats.sigma_factor * stats.std;
  const double dev = entropy - stats.mean;
  return stats.two_sided ? std::abs(dev) > limit : dev > limit;
}

double uam_threshold(double entropy, const UamStats& stats) {
  return is_outlier(entropy, stats) ? stats.outlier_threshold : stats.normal_threshold;
}

Mask threshold_mask(const Volume& prob, double threshold) {
  require_kind(prob, Kind::probability, "threshold");
  Mask out(prob.dims(), prob.spacing(), Kind::label);
  const auto p = prob.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < p.size(); ++i) dst[i] = double(p[i]) >= threshold ? 1.0f : 0.0f;
  return out;
}

Mask apply_threshold(const Volume& prob, const UamStats& stats, double entropy) {
  stats.validate();
  return threshold_mask(prob, uam_threshold(entropy, stats));
}

Mask scar_threshold(const Volume& prob) { return threshold_mask(prob, kScarThreshold); }

void write_stats(const UamStats& stats, const std::filesystem::path& path) {
  stats.validate();
  const json j = {
      {"mean", stats.mean},
      {"std", stats.std},
      {"n_cases", stats.n_cases},
      {"sigma_factor", stats.sigma_factor},
      {"normal_threshold", stats.normal_threshold},
      {"outlier_threshold", stats.outlier_threshold},
      {"two_sided", stats.two_sided},
  };
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::trunc);
  os << j.dump(2) << '\n';
  if (!os) throw Error(ErrorKind::io, "cannot write " + path.string());
}

UamStats read_stats(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::io, "cannot open " + path.string());
  UamStats stats;
  try {
    json j;
    is >> j;
    stats.mean = j.at("mean").get<double>();
    stats.std = j.at("std").get<double>();
    stats.n_cases = j.at("n_cases").get<std::size_t>();
    stats.sigma_factor = j.value("sigma_factor", 3.0);
    stats.normal_threshold = j.value("normal_threshold", 0.5);
    stats.outlier_threshold = j.value("outlier_threshold", 0.2);
    stats.two_sided = j.value("two_sided", false);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::format, path.string() + ": " + e.what());
  }
  stats.validate();
  return stats;
}

EntropyManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::io, "cannot open " + path.string());
  EntropyManifest out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string id;
    if (!(ls >> id) || id.front() == '#') continue;
    double value;
    std::string extra;
    if (!(ls >> value) || (ls >> extra) || !std::isfinite(value))
      throw Error(ErrorKind::format,
                  path.string() + ":" + std::to_string(lineno) + ": expected '<case_id> <entropy>'");
    out.emplace_back(std::move(id), value);
  }
  return out;
}

void write_manifest(const EntropyManifest& entries, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::trunc);
  os << "# case_id entropy_sum_nats\n";
  for (const auto& [id, h] : entries) os << id << ' ' << format_real(h) << '\n';
  if (!os) throw Error(ErrorKind::io, "cannot write " + path.string());
}

}  // namespace bfseg
