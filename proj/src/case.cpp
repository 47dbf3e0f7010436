#include "bfseg/case.hpp"

#include <algorithm>

#include "bfseg/volume_io.hpp"

namespace bfseg {

namespace fs = std::filesystem;

void CaseRecord::validate() const {
  image.validate();
  auto check = [&](const auto& member, const char* name) {
    if (!member) return;
    member->validate();
    require_same_grid(image, *member, std::string("case ") + case_id + " " + name);
  };
  check(la_label, "la_label");
  check(scar_label, "scar_label");
  check(la_prob, "la_prob");
  check(scar_prob, "scar_prob");
  if (la_label) require_kind(*la_label, Kind::label, "la_label");
  if (scar_label) require_kind(*scar_label, Kind::label, "scar_label");
  if (la_prob) require_kind(*la_prob, Kind::probability, "la_prob");
  if (scar_prob) require_kind(*scar_prob, Kind::probability, "scar_prob");
}

void write_case(const CaseRecord& c, const fs::path& dir) {
  c.validate();
  fs::create_directories(dir);
  write_volume(c.image, dir / "image");
  if (c.la_label) write_volume(*c.la_label, dir / "la_label");
  if (c.scar_label) write_volume(*c.scar_label, dir / "scar_label");
  if (c.la_prob) write_volume(*c.la_prob, dir / "la_prob");
  if (c.scar_prob) write_volume(*c.scar_prob, dir / "scar_prob");
}

CaseRecord read_case(const fs::path& dir, std::string case_id) {
  CaseRecord c;
  c.case_id = case_id.empty() ? dir.filename().string() : std::move(case_id);
  c.image = read_volume(dir / "image");
  auto optional_volume = [&](const char* name) -> std::optional<Volume> {
    if (!is_bvol(dir / name)) return std::nullopt;
    return read_volume(dir / name);
  };
  c.la_label = optional_volume("la_label");
  c.scar_label = optional_volume("scar_label");
  c.la_prob = optional_volume("la_prob");
  c.scar_prob = optional_volume("scar_prob");
  c.validate();
  return c;
}

std::vector<std::string> list_case_dirs(const fs::path& root) {
  if (!fs::is_directory(root)) throw Error(ErrorKind::io, root.string() + " is not a directory");
  std::vector<std::string> out;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory()) out.push_back(entry.path().filename().string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace bfseg
