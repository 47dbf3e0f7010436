#pragma once

#include <filesystem>

#include "bfseg/volume.hpp"

namespace bfseg {

/// A .bvol volume is a pair of files sharing a base name: `<base>.json`
/// (header) and `<base>.raw` (little-endian f32 payload in idx() order).
/// Paths may be given as the base, or as either member of the pair.
std::filesystem::path bvol_base(const std::filesystem::path& path);
std::filesystem::path bvol_header_path(const std::filesystem::path& path);
std::filesystem::path bvol_payload_path(const std::filesystem::path& path);

Volume read_volume(const std::filesystem::path& path);
void write_volume(const Volume& v, const std::filesystem::path& path);

bool is_bvol(const std::filesystem::path& path);

}  // namespace bfseg
