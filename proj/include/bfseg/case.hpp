#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bfseg/volume.hpp"

namespace bfseg {

/// One subject: image plus whichever labels and predictions are available.
/// Every present volume shares the image grid.
struct CaseRecord {
  std::string case_id;
  Volume image;
  std::optional<Mask> la_label;
  std::optional<Mask> scar_label;
  std::optional<Volume> la_prob;
  std::optional<Volume> scar_prob;

  void validate() const;
  bool operator==(const CaseRecord&) const = default;
};

/// Writes `<dir>/{image,la_label,scar_label,la_prob,scar_prob}.{json,raw}` for
/// the members that are present.
void write_case(const CaseRecord& c, const std::filesystem::path& dir);
CaseRecord read_case(const std::filesystem::path& dir, std::string case_id = {});

/// Sorted names of the immediate subdirectories of `root`.
std::vector<std::string> list_case_dirs(const std::filesystem::path& root);

}  // namespace bfseg
