#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bfseg/metrics.hpp"

namespace bfseg {

/// One summary line: a row label (method, K value, ...) and its report.
using LabelledReport = std::pair<std::string, EvalReport>;

/// Aligned summary table, one row per labelled report, with Mean/Std
/// sub-columns under each metric, e.g.
///
///   Method      cavity Dice (%)     cavity HD (mm)     cavity ASD (mm)
///                  Mean     Std       Mean     Std        Mean     Std
///
/// `prefix` ("cavity", "scar" or empty) is prepended to the metric names.
/// HD/ASD columns appear when every report carries them.
std::string render_summary(const std::vector<LabelledReport>& rows, const std::string& prefix,
                           const std::string& label_header = "Method");

/// Per-case listing.
std::string render_cases(const EvalReport& report, const std::string& prefix);

/// One JSON object per case and line.
std::string render_jsonl(const EvalReport& report, const std::string& structure);

}  // namespace bfseg
