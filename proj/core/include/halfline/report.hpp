#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "halfline/harness.hpp"

namespace halfline {

inline constexpr const char* kCsvHeader = "preset,b,t,epsilon,metric,value,ratio";

/// 17 significant digits, lowercase scientific; NaN becomes the empty field.
std::string format_number(double v);

/// Header line plus one row per record, in record order.
std::string to_csv(const std::vector<ConvergenceRecord>& records);

/// metric -> true iff every defined ratio of that metric is < 1.
std::map<std::string, bool> monotonicity_verdicts(const std::vector<ConvergenceRecord>& records);

/// JSON object with per-metric verdicts, the check outcomes and an overall
/// "pass" (all checks pass).
std::string summary_json(const std::vector<ConvergenceRecord>& records,
                         const std::vector<CheckOutcome>& outcomes);

struct ReportFiles {
    std::filesystem::path csv;
    std::filesystem::path json;
};

/// Writes `path` (CSV) and the summary beside it with extension .json.
/// Throws InvalidArgument when a file cannot be opened, std::runtime_error
/// when a write fails.
ReportFiles emit_report(const std::vector<ConvergenceRecord>& records, const std::filesystem::path& path,
                        const std::vector<CheckOutcome>& outcomes = {});

}  // namespace halfline
