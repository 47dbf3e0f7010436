#include "bfseg/volume_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <json.hpp>

namespace bfseg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kMagic = "BVOL1";

static_assert(sizeof(float) == 4);

[[noreturn]] void malformed(const fs::path& p, const std::string& why) {
  throw Error(ErrorKind::format, p.string() + ": " + why);
}

std::uint32_t to_le(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  return ((v & 0xffu) << 24) | ((v & 0xff00u) << 8) | ((v >> 8) & 0xff00u) | (v >> 24);
}

}  // namespace

fs::path bvol_base(const fs::path& path) {
  const auto ext = path.extension();
  if (ext == ".json" || ext == ".raw") return fs::path(path).replace_extension();
  return path;
}

fs::path bvol_header_path(const fs::path& path) {
  return fs::path(bvol_base(path).string() + ".json");
}

fs::path bvol_payload_path(const fs::path& path) {
  return fs::path(bvol_base(path).string() + ".raw");
}

bool is_bvol(const fs::path& path) {
  std::error_code ec;
  return fs::is_regular_file(bvol_header_path(path), ec) &&
         fs::is_regular_file(bvol_payload_path(path), ec);
}

Volume read_volume(const fs::path& path) {
  const fs::path header_path = bvol_header_path(path);
  std::ifstream hs(header_path);
  if (!hs) throw Error(ErrorKind::io, "cannot open " + header_path.string());

  json h;
  try {
    hs >> h;
  } catch (const json::exception& e) {
    malformed(header_path, std::string("header is not valid JSON: ") + e.what());
  }

  Dims dims;
  Spacing spacing;
  Kind kind = Kind::image;
  try {
    if (h.at("magic").get<std::string>() != kMagic) malformed(header_path, "bad magic");
    if (h.at("byte_order").get<std::string>() != "LE")
      malformed(header_path, "byte_order must be LE");
    if (h.at("dtype").get<std::string>() != "f32") malformed(header_path, "dtype must be f32");
    const auto& d = h.at("dims");
    const auto& s = h.at("spacing_mm");
    if (!d.is_array() || d.size() != 3) malformed(header_path, "dims must have 3 entries");
    if (!s.is_array() || s.size() != 3)
      malformed(header_path, "spacing_mm must have 3 entries");
    dims = {d[0].get<std::int64_t>(), d[1].get<std::int64_t>(), d[2].get<std::int64_t>()};
    spacing = {s[0].get<double>(), s[1].get<double>(), s[2].get<double>()};
    kind = kind_from_string(h.at("kind").get<std::string>());
  } catch (const json::exception& e) {
    malformed(header_path, e.what());
  }
  if (!dims.valid()) malformed(header_path, "dims must be positive");
  if (!spacing.valid()) malformed(header_path, "spacing must be positive and finite");

  const fs::path raw_path = bvol_payload_path(path);
  std::ifstream rs(raw_path, std::ios::binary);
  if (!rs) throw Error(ErrorKind::io, "cannot open " + raw_path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(rs)), {});
  if (bytes.size() != dims.count() * 4)
    throw Error(ErrorKind::dims_mismatch,
                raw_path.string() + ": payload holds " + std::to_string(bytes.size() / 4) +
                    " values (" + std::to_string(bytes.size()) + " bytes), header needs " +
                    std::to_string(dims.count()));

  std::vector<float> data(dims.count());
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::uint32_t word;
    std::memcpy(&word, bytes.data() + 4 * i, 4);
    data[i] = std::bit_cast<float>(to_le(word));
  }
  Volume v(dims, spacing, kind, std::move(data));
  v.validate();
  return v;
}

void write_volume(const Volume& v, const fs::path& path) {
  v.validate();
  const json h = {
      {"magic", kMagic},
      {"dims", {v.dims().nx, v.dims().ny, v.dims().nz}},
      {"spacing_mm", {v.spacing().sx, v.spacing().sy, v.spacing().sz}},
      {"kind", std::string(to_string(v.kind()))},
      {"byte_order", "LE"},
      {"dtype", "f32"},
  };
  const fs::path header_path = bvol_header_path(path);
  if (header_path.has_parent_path()) fs::create_directories(header_path.parent_path());

  std::ofstream hs(header_path, std::ios::trunc);
  hs << h.dump(2) << '\n';
  if (!hs) throw Error(ErrorKind::io, "cannot write " + header_path.string());

  std::vector<char> bytes(v.size() * 4);
  const auto vals = v.values();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const std::uint32_t word = to_le(std::bit_cast<std::uint32_t>(vals[i]));
    std::memcpy(bytes.data() + 4 * i, &word, 4);
  }
  const fs::path raw_path = bvol_payload_path(path);
  std::ofstream rs(raw_path, std::ios::binary | std::ios::trunc);
  rs.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!rs) throw Error(ErrorKind::io, "cannot write " + raw_path.string());
}

}  // namespace bfseg
