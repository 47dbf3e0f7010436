#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bfseg/case.hpp"
#include "bfseg/losses.hpp"
#include "bfseg/metrics.hpp"
#include "bfseg/parallel.hpp"
#include "bfseg/pipeline.hpp"
#include "bfseg/report.hpp"
#include "bfseg/synth.hpp"
#include "bfseg/uam.hpp"
#include "bfseg/volume_io.hpp"

namespace bfseg::cli {

namespace fs = std::filesystem;

namespace {

std::string real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

int default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

// Runs task(i) for i in [0, n) on `jobs` workers. Failures are rethrown in index
// order so the reported error does not depend on scheduling.
template <class Task>
void run_pool(std::size_t n, int jobs, Task&& task) {
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(n, 1))));
  set_kernel_threads(std::max(1, default_jobs() / jobs));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

template <class T>
std::vector<T> parse_triple(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    T v;
    if (!(is >> v)) throw Error(ErrorKind::invalid_argument, std::string("bad ") + what + ": " + text);
    out.push_back(v);
  }
  if (out.size() != 3) throw Error(ErrorKind::invalid_argument, std::string(what) + " needs 3 values");
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::trunc | std::ios::binary);
  os << text;
  if (!os) throw Error(ErrorKind::io, "cannot write " + path.string());
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string out;
  std::uint64_t seed = 1;
  int count = 1;
  int outliers = 0;
  std::string dims = "48,48,12";
  std::string spacing = "0.625,0.625,2.5";
  double corruption = 0.0;
  int jobs = default_jobs();
};

int cmd_synth(const SynthArgs& a) {
  const auto d = parse_triple<std::int64_t>(a.dims, "dims");
  const auto s = parse_triple<double>(a.spacing, "spacing");
  const Dims dims{d[0], d[1], d[2]};
  const Spacing spacing{s[0], s[1], s[2]};
  SynthOptions opts;
  opts.corruption = a.corruption;
  if (a.count < 0 || a.outliers < 0)
    throw Error(ErrorKind::invalid_argument, "case counts must be >= 0");

  const std::size_t total = static_cast<std::size_t>(a.count + a.outliers);
  std::vector<std::string> ids(total);
  run_pool(total, a.jobs, [&](std::size_t i) {
    const std::uint64_t seed = a.seed + i;
    const bool outlier = i >= static_cast<std::size_t>(a.count);
    CaseRecord c = outlier ? make_outlier_case(seed, dims, spacing, opts)
                           : make_case(seed, dims, spacing, opts);
    write_case(c, fs::path(a.out) / c.case_id);
    ids[i] = c.case_id;
  });

  nlohmann::json manifest = {{"corruption", a.corruption}, {"cases", nlohmann::json::array()}};
  for (std::size_t i = 0; i < total; ++i)
    manifest["cases"].push_back({{"case_id", ids[i]},
                                 {"seed", a.seed + i},
                                 {"type", i >= static_cast<std::size_t>(a.count) ? "outlier" : "control"}});
  write_text(fs::path(a.out) / "manifest.json", manifest.dump(2) + "\n");
  std::cout << "wrote " << total << " cases to " << a.out << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- stage 1

struct Stage1Args {
  std::string prob;
  std::string stats;
  std::string out;
  std::string band_units = "mm";
  std::string border = "background";
};

int cmd_stage1_post(const Stage1Args& a) {
  const Volume prob = read_volume(a.prob);
  require_kind(prob, Kind::probability, "--prob");
  const UamStats stats = read_stats(a.stats);
  const BandUnits units = a.band_units == "voxel" ? BandUnits::voxels : BandUnits::millimeters;
  const BorderMode border =
      a.border == "foreground" ? BorderMode::outside_foreground : BorderMode::outside_background;

  const Stage1Result r = stage1_post(prob, stats, border, units);
  const fs::path out(a.out);
  write_volume(r.mask, out / "la_mask");
  write_volume(r.band, out / "band");
  write_volume(r.distance, out / "dm");
  std::cout << "entropy_sum: " << real(r.entropy) << '\n'
            << "outlier: " << (r.outlier ? "yes" : "no") << '\n'
            << "threshold: " << short_real(r.threshold) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- stage 2

struct Stage2Args {
  std::string image;
  std::string dm;
  std::string out;
};

int cmd_stage2_prep(const Stage2Args& a) {
  const Volume image = read_volume(a.image);
  const Volume dm = read_volume(a.dm);
  write_bundle(image, dm, a.out);
  std::cout << "channels: image, distance\n";
  return kExitOk;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string pred;
  std::string gt;
  std::string out;
  std::string label = "prediction";
  bool hd95 = false;
  int jobs = default_jobs();
};

std::optional<Mask> load_prediction_mask(const fs::path& dir, const char* mask_name,
                                         const char* prob_name, bool scar) {
  if (is_bvol(dir / mask_name)) return read_volume(dir / mask_name);
  if (is_bvol(dir / prob_name)) {
    const Volume p = read_volume(dir / prob_name);
    return scar ? scar_threshold(p) : threshold_mask(p, 0.5);
  }
  return std::nullopt;
}

int cmd_evaluate(const EvaluateArgs& a) {
  const auto pred_ids = list_case_dirs(a.pred);
  const auto gt_ids = list_case_dirs(a.gt);
  if (pred_ids != gt_ids) {
    std::vector<std::string> missing;
    std::set_symmetric_difference(pred_ids.begin(), pred_ids.end(), gt_ids.begin(), gt_ids.end(),
                                  std::back_inserter(missing));
    std::string list;
    for (const auto& m : missing) list += " " + m;
    throw Error(ErrorKind::invalid_argument, "prediction and ground-truth case sets differ:" + list);
  }
  if (pred_ids.empty()) throw Error(ErrorKind::empty_input, "no cases to evaluate");

  const HausdorffMode mode = a.hd95 ? HausdorffMode::p95 : HausdorffMode::max;
  const std::size_t n = pred_ids.size();
  std::vector<std::optional<CaseMetrics>> cavity(n), scar(n);
  run_pool(n, a.jobs, [&](std::size_t i) {
    const fs::path pdir = fs::path(a.pred) / pred_ids[i];
    const fs::path gdir = fs::path(a.gt) / gt_ids[i];
    if (is_bvol(gdir / "la_label")) {
      const Mask truth = read_volume(gdir / "la_label");
      if (auto pred = load_prediction_mask(pdir, "la_mask", "la_prob", false)) {
        require_same_grid(*pred, truth, pred_ids[i]);
        cavity[i] = evaluate_case(pred_ids[i], *pred, truth, true, mode);
      }
    }
    if (is_bvol(gdir / "scar_label")) {
      const Mask truth = read_volume(gdir / "scar_label");
      if (auto pred = load_prediction_mask(pdir, "scar_mask", "scar_prob", true)) {
        require_same_grid(*pred, truth, pred_ids[i]);
        scar[i] = evaluate_case(pred_ids[i], *pred, truth, false);
      }
    }
  });

  std::vector<CaseMetrics> cavity_rows, scar_rows;
  for (std::size_t i = 0; i < n; ++i) {
    if (cavity[i]) cavity_rows.push_back(*cavity[i]);
    if (scar[i]) scar_rows.push_back(*scar[i]);
  }
  if (cavity_rows.empty() && scar_rows.empty())
    throw Error(ErrorKind::empty_input, "no matching prediction/label pairs found");

  std::string text, jsonl;
  if (!cavity_rows.empty()) {
    const EvalReport rep = aggregate(cavity_rows);
    text += render_summary({{a.label, rep}}, "cavity") + "\n" + render_cases(rep, "cavity") + "\n";
    jsonl += render_jsonl(rep, "cavity");
  }
  if (!scar_rows.empty()) {
    const EvalReport rep = aggregate(scar_rows);
    text += render_summary({{a.label, rep}}, "scar") + "\n" + render_cases(rep, "scar");
    jsonl += render_jsonl(rep, "scar");
  }
  std::cout << text;
  if (!a.out.empty()) {
    write_text(a.out + ".txt", text);
    write_text(a.out + ".jsonl", jsonl);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- loss-eval

struct LossArgs {
  std::string prob;
  std::string gt;
  std::vector<double> ks{100, 20, 10, 5};
  std::string focus_out;
  std::string normalization = "selected";
};

int cmd_loss_eval(const LossArgs& a) {
  const Volume prob = read_volume(a.prob);
  const Mask truth = read_volume(a.gt);
  require_kind(prob, Kind::probability, "--prob");
  require_kind(truth, Kind::label, "--gt");
  if (!(prob.dims() == truth.dims()))
    throw Error(ErrorKind::dims_mismatch, "prediction and label dims differ");
  for (double k : a.ks) TopKConfig{k}.validate();

  const double ce = cross_entropy(prob, truth, false).value;
  const double dice = dice_loss(prob, truth, false).value;
  std::cout << "ce: " << real(ce) << '\n' << "dice: " << real(dice) << '\n';
  std::cout << "k topk combined selected\n";
  for (double k : a.ks) {
    TopKConfig cfg{k, a.normalization == "total" ? TopKNormalization::total
                                                 : TopKNormalization::selected};
    const double topk = topk_loss(prob, truth, cfg, false).value;
    const std::size_t sel = topk_count(k, prob.size());
    std::cout << short_real(k) << ' ' << real(topk) << ' ' << real(topk + dice) << ' ' << sel
              << '\n';
    if (!a.focus_out.empty())
      write_volume(topk_focus_mask(prob, truth, cfg),
                   fs::path(a.focus_out) / ("focus_k" + short_real(k)));
  }
  return kExitOk;
}

// ---------------------------------------------------------------- uam-fit

struct UamArgs {
  std::string probs;
  std::string manifest;
  std::string out;
  std::string manifest_out;
  double sigma_factor = 3.0;
  double normal_threshold = 0.5;
  double outlier_threshold = 0.2;
  bool two_sided = false;
  int jobs = default_jobs();
};

// case_id -> probability volume path, sorted by case id
std::vector<std::pair<std::string, fs::path>> collect_probability_files(const fs::path& root) {
  if (!fs::is_directory(root)) throw Error(ErrorKind::io, root.string() + " is not a directory");
  std::map<std::string, fs::path> found;
  for (const auto& e : fs::directory_iterator(root)) {
    if (e.is_directory() && is_bvol(e.path() / "la_prob"))
      found[e.path().filename().string()] = e.path() / "la_prob";
    else if (e.is_regular_file() && e.path().extension() == ".json" && is_bvol(e.path()))
      found[e.path().stem().string()] = bvol_base(e.path());
  }
  return {found.begin(), found.end()};
}

int cmd_uam_fit(const UamArgs& a) {
  EntropyManifest entries;
  if (!a.manifest.empty()) {
    entries = read_manifest(a.manifest);
  } else {
    const auto files = collect_probability_files(a.probs);
    entries.resize(files.size());
    run_pool(files.size(), a.jobs, [&](std::size_t i) {
      entries[i] = {files[i].first, entropy_sum(read_volume(files[i].second))};
    });
  }
  std::vector<double> h;
  for (const auto& [id, v] : entries) h.push_back(v);
  UamStats stats = fit_population(h);
  stats.sigma_factor = a.sigma_factor;
  stats.normal_threshold = a.normal_threshold;
  stats.outlier_threshold = a.outlier_threshold;
  stats.two_sided = a.two_sided;
  write_stats(stats, a.out);
  if (!a.manifest_out.empty()) write_manifest(entries, a.manifest_out);
  std::cout << "mean: " << real(stats.mean) << '\n'
            << "std: " << real(stats.std) << '\n'
            << "n: " << stats.n_cases << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Boundary-focused LA/scar segmentation toolkit"};
  app.set_config("--config", "", "Optional TOML/INI file with default option values");
  app.require_subcommand(1);

  SynthArgs synth;
  auto* sc = app.add_subcommand("synth", "Write synthetic cases with known ground truth");
  sc->add_option("--out", synth.out, "Output directory")->required();
  sc->add_option("--seed", synth.seed, "First seed");
  sc->add_option("--count", synth.count, "Number of control cases");
  sc->add_option("--outliers", synth.outliers, "Number of high-uncertainty cases appended");
  sc->add_option("--dims", synth.dims, "nx,ny,nz");
  sc->add_option("--spacing", synth.spacing, "sx,sy,sz in mm");
  sc->add_option("--corruption", synth.corruption, "Probability-map noise level")->check(CLI::NonNegativeNumber);
  sc->add_option("--jobs", synth.jobs, "Worker threads")->check(CLI::PositiveNumber);

  Stage1Args s1;
  auto* c1 = app.add_subcommand("stage1-post", "Threshold, band and signed distance map from a cavity probability map");
  c1->add_option("--prob", s1.prob, "Cavity probability .bvol")->required();
  c1->add_option("--stats", s1.stats, "UAM statistics file")->required();
  c1->add_option("--out", s1.out, "Output directory")->required();
  c1->add_option("--band-units", s1.band_units, "Units of the band term")->check(CLI::IsMember({"mm", "voxel"}));
  c1->add_option("--border", s1.border, "Outside-image convention for the band")->check(CLI::IsMember({"background", "foreground"}));

  Stage2Args s2;
  auto* c2 = app.add_subcommand("stage2-prep", "Bundle image and distance map as the stage-2 input");
  c2->add_option("--image", s2.image, "Image .bvol")->required();
  c2->add_option("--dm", s2.dm, "Signed distance map .bvol")->required();
  c2->add_option("--out", s2.out, "Bundle directory")->required();

  EvaluateArgs ev;
  auto* ce = app.add_subcommand("evaluate", "Dice/HD/ASD report over matching case directories");
  ce->add_option("--pred", ev.pred, "Prediction root (one directory per case)")->required();
  ce->add_option("--gt", ev.gt, "Ground-truth root (one directory per case)")->required();
  ce->add_option("--out", ev.out, "Report prefix; writes <prefix>.txt and <prefix>.jsonl");
  ce->add_option("--label", ev.label, "Row label in the summary table");
  ce->add_flag("--hd95", ev.hd95, "Use the 95th-percentile Hausdorff distance");
  ce->add_option("--jobs", ev.jobs, "Worker threads")->check(CLI::PositiveNumber);

  LossArgs le;
  auto* cl = app.add_subcommand("loss-eval", "CE, Dice, TopK and combined loss values for a prediction");
  cl->add_option("--prob", le.prob, "Probability .bvol")->required();
  cl->add_option("--gt", le.gt, "Label .bvol")->required();
  cl->add_option("--k", le.ks, "TopK percentages")->delimiter(',');
  cl->add_option("--focus-out", le.focus_out, "Directory for TopK focus masks");
  cl->add_option("--normalize", le.normalization, "TopK normaliser")->check(CLI::IsMember({"selected", "total"}));

  UamArgs ua;
  auto* cu = app.add_subcommand("uam-fit", "Fit entropy-sum population statistics");
  auto* probs = cu->add_option("--probs", ua.probs, "Directory of probability volumes or case directories");
  auto* manifest = cu->add_option("--manifest", ua.manifest, "File of '<case_id> <entropy>' lines");
  probs->excludes(manifest);
  cu->add_option("--out", ua.out, "Statistics file to write")->required();
  cu->add_option("--manifest-out", ua.manifest_out, "Also write the per-case entropy manifest");
  cu->add_option("--sigma-factor", ua.sigma_factor, "Outlier distance in standard deviations");
  cu->add_option("--normal-threshold", ua.normal_threshold);
  cu->add_option("--outlier-threshold", ua.outlier_threshold);
  cu->add_flag("--two-sided", ua.two_sided, "Flag low-entropy cases too");
  cu->add_option("--jobs", ua.jobs, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (sc->parsed()) return cmd_synth(synth);
    if (c1->parsed()) return cmd_stage1_post(s1);
    if (c2->parsed()) return cmd_stage2_prep(s2);
    if (ce->parsed()) return cmd_evaluate(ev);
    if (cl->parsed()) return cmd_loss_eval(le);
    if (cu->parsed()) {
      if (ua.probs.empty() && ua.manifest.empty())
        throw Error(ErrorKind::invalid_argument, "uam-fit needs --probs or --manifest");
      return cmd_uam_fit(ua);
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    const bool degenerate = e.kind() == ErrorKind::degenerate || e.kind() == ErrorKind::no_background;
    return degenerate ? kExitDegenerate : kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
  return kExitBadInput;
}

}  // namespace bfseg::cli
