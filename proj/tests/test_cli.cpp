#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "bfseg/case.hpp"
#include "bfseg/losses.hpp"
#include "bfseg/volume_io.hpp"
#include "test_util.hpp"

using namespace bfseg;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Value following `key` on its own line in CLI output.
std::string field(const std::string& out, const std::string& key) {
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(key + ": ", 0) == 0) return line.substr(key.size() + 2);
  return {};
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

// Snapshot of every regular file under root, keyed by relative path.
std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
  return out;
}

}  // namespace

TEST_CASE("cli: usage errors exit 2") {
  test::TempDir d;
  CHECK(test::run_cli("").exit_code != 0);
  CHECK(test::run_cli("no-such-command").exit_code != 0);
  CHECK(test::run_cli("stage1-post --prob " + test::quote(d.path() / "missing") + " --stats x --out y").exit_code == 2);
}

TEST_CASE("cli: uam-fit") {
  test::TempDir d;
  {
    std::ofstream m(d.path() / "m.txt");
    m << "# two cases\na 8\nb 12\n";
  }
  auto r = test::run_cli("uam-fit --manifest " + test::quote(d.path() / "m.txt") + " --out " +
                         test::quote(d.path() / "s.json"));
  REQUIRE(r.exit_code == 0);
  CHECK(std::stod(field(r.out, "mean")) == 10.0);
  CHECK(std::stod(field(r.out, "std")) == 2.0);
  CHECK(field(r.out, "n") == "2");

  {
    std::ofstream m(d.path() / "one.txt");
    m << "a 8\n";
  }
  CHECK(test::run_cli("uam-fit --manifest " + test::quote(d.path() / "one.txt") + " --out " +
                      test::quote(d.path() / "t.json")).exit_code == 2);

  SUBCASE("directory and manifest routes agree") {
    REQUIRE(test::run_cli("synth --out " + test::quote(d.path() / "s") + " --count 4").exit_code == 0);
    auto a = test::run_cli("uam-fit --probs " + test::quote(d.path() / "s") + " --out " +
                           test::quote(d.path() / "a.json") + " --manifest-out " + test::quote(d.path() / "a.txt"));
    REQUIRE(a.exit_code == 0);
    auto b = test::run_cli("uam-fit --manifest " + test::quote(d.path() / "a.txt") + " --out " +
                           test::quote(d.path() / "b.json"));
    REQUIRE(b.exit_code == 0);
    const double ma = std::stod(field(a.out, "mean")), mb = std::stod(field(b.out, "mean"));
    const double sa = std::stod(field(a.out, "std")), sb = std::stod(field(b.out, "std"));
    CHECK(std::abs(ma - mb) <= 1e-6 * ma);
    CHECK(std::abs(sa - sb) <= 1e-6 * sa);
  }
}

TEST_CASE("cli: stage1-post thresholds and failures") {
  test::TempDir d;
  const auto s = d.path() / "s";
  REQUIRE(test::run_cli("synth --out " + test::quote(s) + " --count 8 --outliers 1 --corruption 0.1").exit_code == 0);
  // Fit on controls only.
  fs::create_directories(d.path() / "controls");
  for (int i = 1; i <= 8; ++i)
    fs::create_directory_symlink(s / ("case_" + std::to_string(i)), d.path() / "controls" / ("case_" + std::to_string(i)));
  REQUIRE(test::run_cli("uam-fit --probs " + test::quote(d.path() / "controls") + " --out " +
                        test::quote(d.path() / "st.json")).exit_code == 0);
  const std::string st = " --stats " + test::quote(d.path() / "st.json");

  auto a = test::run_cli("stage1-post --prob " + test::quote(s / "case_3" / "la_prob") + st + " --out " + test::quote(d.path() / "a"));
  REQUIRE(a.exit_code == 0);
  CHECK(field(a.out, "outlier") == "no");
  CHECK(field(a.out, "threshold") == "0.5");
  for (const char* f : {"la_mask", "band", "dm"}) CHECK(is_bvol(d.path() / "a" / f));

  auto b = test::run_cli("stage1-post --prob " + test::quote(s / "outlier_9" / "la_prob") + st + " --out " + test::quote(d.path() / "b"));
  REQUIRE(b.exit_code == 0);
  CHECK(field(b.out, "outlier") == "yes");
  CHECK(field(b.out, "threshold") == "0.2");

  const Volume like = read_volume(s / "case_3" / "la_prob");
  write_volume(Volume(like.dims(), like.spacing(), Kind::probability), d.path() / "zero");
  CHECK(test::run_cli("stage1-post --prob " + test::quote(d.path() / "zero") + st + " --out " + test::quote(d.path() / "c")).exit_code == 3);

  SUBCASE("stage2-prep spacing mismatch") {
    const Volume dm = read_volume(d.path() / "a" / "dm");
    write_volume(Volume(dm.dims(), {1, 1, 1}, Kind::distance, 0.0f), d.path() / "odd_dm");
    CHECK(test::run_cli("stage2-prep --image " + test::quote(s / "case_3" / "image") + " --dm " +
                        test::quote(d.path() / "odd_dm") + " --out " + test::quote(d.path() / "bundle")).exit_code == 2);
    auto ok = test::run_cli("stage2-prep --image " + test::quote(s / "case_3" / "image") + " --dm " +
                            test::quote(d.path() / "a" / "dm") + " --out " + test::quote(d.path() / "bundle"));
    CHECK(ok.exit_code == 0);
    CHECK(ok.out.find("channels: image, distance") != std::string::npos);
  }
}

TEST_CASE("cli: loss-eval") {
  test::TempDir d;
  const auto s = d.path() / "s";
  REQUIRE(test::run_cli("synth --out " + test::quote(s) + " --count 1 --dims 20,20,4").exit_code == 0);
  const auto c = s / "case_1";
  auto r = test::run_cli("loss-eval --prob " + test::quote(c / "la_prob") + " --gt " + test::quote(c / "la_label") +
                         " --k 100,10 --focus-out " + test::quote(d.path() / "f"));
  REQUIRE(r.exit_code == 0);
  const auto ls = lines_of(r.out);
  REQUIRE(ls.size() == 5);
  const auto row100 = split_ws(ls[3]);
  CHECK(row100[0] == "100");
  CHECK(row100[1] == field(r.out, "ce"));

  const Volume f10 = read_volume(d.path() / "f" / "focus_k10");
  CHECK(count_foreground(f10) == static_cast<std::size_t>(std::ceil(0.1 * f10.size())));
  CHECK(split_ws(ls[4])[3] == std::to_string(count_foreground(f10)));

  SUBCASE("perfect prediction") {
    write_volume(read_volume(c / "la_label").as_kind(Kind::probability), d.path() / "perfect");
    auto p = test::run_cli("loss-eval --prob " + test::quote(d.path() / "perfect") + " --gt " + test::quote(c / "la_label"));
    REQUIRE(p.exit_code == 0);
    CHECK(std::stod(field(p.out, "ce")) <= 1e-4);
    CHECK(std::stod(field(p.out, "dice")) <= 1e-4);
    const auto pl = lines_of(p.out);
    for (std::size_t i = 3; i < pl.size(); ++i) {
      const auto w = split_ws(pl[i]);
      CHECK(std::stod(w[1]) <= 1e-4);
      CHECK(std::stod(w[2]) <= 1e-4);
    }
  }

  CHECK(test::run_cli("loss-eval --prob " + test::quote(c / "la_prob") + " --gt " + test::quote(c / "la_label") + " --k 0").exit_code == 2);
  CHECK(test::run_cli("loss-eval --prob " + test::quote(c / "la_prob") + " --gt " + test::quote(c / "la_label") + " --k 101").exit_code == 2);
}

TEST_CASE("cli: evaluate") {
  test::TempDir d;
  const auto s = d.path() / "s";
  REQUIRE(test::run_cli("synth --out " + test::quote(s) + " --count 3 --dims 24,24,6").exit_code == 0);
  auto r = test::run_cli("evaluate --pred " + test::quote(s) + " --gt " + test::quote(s) + " --out " + test::quote(d.path() / "rep"));
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("Mean") != std::string::npos);
  CHECK(r.out.find("Std") != std::string::npos);
  const std::string jl = slurp(d.path() / "rep.jsonl");
  for (const auto& line : lines_of(jl)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j["dice_pct"].get<double>() == 100.0);
    if (j.contains("hd_mm") && !j["hd_mm"].is_null()) CHECK(j["hd_mm"].get<double>() == 0.0);
    if (j.contains("asd_mm") && !j["asd_mm"].is_null()) CHECK(j["asd_mm"].get<double>() == 0.0);
  }

  fs::remove_all(s / "case_2");
  fs::create_directories(d.path() / "other");
  fs::copy(s, d.path() / "other", fs::copy_options::recursive);
  fs::remove_all(d.path() / "other" / "case_3");
  CHECK(test::run_cli("evaluate --pred " + test::quote(d.path() / "other") + " --gt " + test::quote(s)).exit_code == 2);
}

TEST_CASE("cli: outputs are deterministic across runs and job counts") {
  test::TempDir d;
  auto pipeline = [&](const std::string& tag, int jobs) {
    const fs::path root = d.path() / tag;
    const std::string j = " --jobs " + std::to_string(jobs);
    REQUIRE(test::run_cli("synth --out " + test::quote(root / "s") + " --count 4 --outliers 1 --corruption 0.2" + j).exit_code == 0);
    REQUIRE(test::run_cli("uam-fit --probs " + test::quote(root / "s") + " --out " + test::quote(root / "st.json") +
                          " --manifest-out " + test::quote(root / "m.txt") + j).exit_code == 0);
    REQUIRE(test::run_cli("stage1-post --prob " + test::quote(root / "s" / "case_2" / "la_prob") + " --stats " +
                          test::quote(root / "st.json") + " --out " + test::quote(root / "p")).exit_code == 0);
    REQUIRE(test::run_cli("loss-eval --prob " + test::quote(root / "s" / "case_2" / "la_prob") + " --gt " +
                          test::quote(root / "s" / "case_2" / "la_label") + " --focus-out " + test::quote(root / "f")).exit_code == 0);
    REQUIRE(test::run_cli("evaluate --pred " + test::quote(root / "s") + " --gt " + test::quote(root / "s") +
                          " --out " + test::quote(root / "rep") + j).exit_code == 0);
    return tree(root);
  };
  const auto a = pipeline("a", 1);
  const auto b = pipeline("b", 1);
  const auto c = pipeline("c", 4);
  CHECK(a.size() > 20);
  CHECK(a == b);
  CHECK(a == c);
}
