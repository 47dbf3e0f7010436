#include "bfseg/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace bfseg {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad_left(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : std::string(w - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

std::string metric_name(const std::string& prefix, const char* name) {
  return prefix.empty() ? std::string(name) : prefix + " " + name;
}

constexpr std::size_t kNum = 10;

}  // namespace

std::string render_summary(const std::vector<LabelledReport>& rows, const std::string& prefix,
                           const std::string& label_header) {
  bool surface = !rows.empty();
  std::size_t label_w = label_header.size();
  for (const auto& [label, rep] : rows) {
    surface = surface && rep.hd && rep.asd;
    label_w = std::max(label_w, label.size());
  }
  label_w += 2;

  std::vector<std::string> metrics{metric_name(prefix, "Dice (%)")};
  if (surface) {
    metrics.push_back(metric_name(prefix, "HD (mm)"));
    metrics.push_back(metric_name(prefix, "ASD (mm)"));
  }
  const std::size_t group_w = 2 * kNum;

  std::ostringstream os;
  os << pad_right(label_header, label_w);
  for (const auto& m : metrics) os << "  " << pad_left(m, std::max(group_w, m.size()));
  os << '\n' << std::string(label_w, ' ');
  for (const auto& m : metrics)
    os << "  " << std::string(std::max(group_w, m.size()) - 2 * kNum, ' ') << pad_left("Mean", kNum)
       << pad_left("Std", kNum);
  os << '\n';
  std::size_t width = label_w;
  for (const auto& m : metrics) width += 2 + std::max(group_w, m.size());
  os << std::string(width, '-') << '\n';

  for (const auto& [label, rep] : rows) {
    os << pad_right(label, label_w);
    auto cell = [&](const std::string& m, const MeanStd& v, int digits) {
      os << "  " << std::string(std::max(group_w, m.size()) - 2 * kNum, ' ')
         << pad_left(fixed(v.mean, digits), kNum) << pad_left(fixed(v.std, digits), kNum);
    };
    cell(metrics[0], rep.dice, 2);
    if (surface) {
      cell(metrics[1], *rep.hd, 2);
      cell(metrics[2], *rep.asd, 3);
    }
    os << '\n';
  }
  return os.str();
}

std::string render_cases(const EvalReport& report, const std::string& prefix) {
  std::size_t id_w = 4;
  for (const auto& r : report.rows) id_w = std::max(id_w, r.case_id.size());
  id_w += 2;
  const std::string dice = metric_name(prefix, "Dice (%)");
  const std::string hd = metric_name(prefix, "HD (mm)");
  const std::string sd = metric_name(prefix, "ASD (mm)");
  const std::size_t w = std::max({kNum, dice.size(), hd.size(), sd.size()}) + 2;

  std::ostringstream os;
  os << pad_right("Case", id_w) << pad_left(dice, w) << pad_left(hd, w) << pad_left(sd, w) << '\n';
  for (const auto& r : report.rows) {
    os << pad_right(r.case_id, id_w) << pad_left(fixed(r.dice_pct, 2), w)
       << pad_left(r.hd_mm ? fixed(*r.hd_mm, 2) : "-", w)
       << pad_left(r.asd_mm ? fixed(*r.asd_mm, 3) : "-", w) << '\n';
  }
  return os.str();
}

std::string render_jsonl(const EvalReport& report, const std::string& structure) {
  std::ostringstream os;
  for (const auto& r : report.rows) {
    nlohmann::json j = {{"case_id", r.case_id}, {"structure", structure}, {"dice_pct", r.dice_pct}};
    j["hd_mm"] = r.hd_mm ? nlohmann::json(*r.hd_mm) : nlohmann::json(nullptr);
    j["asd_mm"] = r.asd_mm ? nlohmann::json(*r.asd_mm) : nlohmann::json(nullptr);
    os << j.dump() << '\n';
  }
  return os.str();
}

}  // namespace bfseg
