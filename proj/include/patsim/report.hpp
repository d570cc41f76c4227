#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "patsim/eval.hpp"

namespace patsim {

enum class ReportFormat { Text, Csv, Json };

ReportFormat parse_report_format(std::string_view name);

struct ReportSection {
  std::string label;
  WinRateTable table;
};

struct Report {
  std::vector<ReportSection> sections;
  std::vector<ScoreSummary> distributions;
  std::vector<std::pair<std::string, std::uint64_t>> seeds;  // stage -> seed, in resolution order
};

/// Byte-stable rendering; percentages are rounded half away from zero to integers.
std::string render_report(const Report& report, ReportFormat format);

}  // namespace patsim
