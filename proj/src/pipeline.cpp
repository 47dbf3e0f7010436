#include "bfseg/pipeline.hpp"

#include <fstream>

#include <json.hpp>

#include "bfseg/volume_io.hpp"

namespace bfseg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {
constexpr const char* kBundleMagic = "BVOLBUNDLE1";
}

Stage1Result stage1_post(const Volume& la_prob, const UamStats& stats, BorderMode border,
                         BandUnits units) {
  require_kind(la_prob, Kind::probability, "stage1_post");
  stats.validate();
  Stage1Result r;
  r.entropy = entropy_sum(la_prob);
  r.outlier = is_outlier(r.entropy, stats);
  r.threshold = r.outlier ? stats.outlier_threshold : stats.normal_threshold;
  r.mask = threshold_mask(la_prob, r.threshold);
  if (count_foreground(r.mask) == 0)
    throw Error(ErrorKind::degenerate,
                "thresholded cavity mask is empty, so the boundary band is degenerate");
  r.band = boundary_mask(r.mask, border);
  r.distance = signed_boundary_distance(r.band, units);
  return r;
}

void write_bundle(const Volume& image, const Volume& distance, const fs::path& dir) {
  require_kind(image, Kind::image, "stage-2 bundle image channel");
  require_kind(distance, Kind::distance, "stage-2 bundle distance channel");
  require_same_grid(image, distance, "stage-2 bundle");
  fs::create_directories(dir);
  write_volume(image, dir / "ch0_image");
  write_volume(distance, dir / "ch1_distance");
  const json j = {
      {"magic", kBundleMagic},
      {"dims", {image.dims().nx, image.dims().ny, image.dims().nz}},
      {"spacing_mm", {image.spacing().sx, image.spacing().sy, image.spacing().sz}},
      {"channels",
       json::array({json{{"index", 0}, {"name", "image"}, {"file", "ch0_image"}},
                    json{{"index", 1}, {"name", "distance"}, {"file", "ch1_distance"}}})},
  };
  std::ofstream os(dir / "bundle.json", std::ios::trunc);
  os << j.dump(2) << '\n';
  if (!os) throw Error(ErrorKind::io, "cannot write " + (dir / "bundle.json").string());
}

Bundle read_bundle(const fs::path& dir) {
  std::ifstream is(dir / "bundle.json");
  if (!is) throw Error(ErrorKind::io, "cannot open " + (dir / "bundle.json").string());
  json j;
  std::vector<std::string> files;
  try {
    is >> j;
    if (j.at("magic").get<std::string>() != kBundleMagic)
      throw Error(ErrorKind::format, "bundle.json: bad magic");
    const auto& ch = j.at("channels");
    if (!ch.is_array() || ch.size() != 2)
      throw Error(ErrorKind::format, "bundle.json: expected exactly two channels");
    if (ch[0].at("name") != "image" || ch[1].at("name") != "distance")
      throw Error(ErrorKind::format, "bundle.json: channel order must be [image, distance]");
    for (const auto& c : ch) files.push_back(c.at("file").get<std::string>());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::format, std::string("bundle.json: ") + e.what());
  }
  Bundle b{read_volume(dir / files[0]), read_volume(dir / files[1])};
  require_same_grid(b.image, b.distance, "stage-2 bundle");
  return b;
}

}  // namespace bfseg
