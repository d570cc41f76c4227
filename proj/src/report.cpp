#include "patsim/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "patsim/errors.hpp"
#include "patsim/external_vectors.hpp"

namespace patsim {

ReportFormat parse_report_format(std::string_view name) {
  if (name == "text") return ReportFormat::Text;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw ParameterError("unknown report format '" + std::string(name) + "' (expected text, csv or json)");
}

namespace {

long rounded(double pct) { return std::lround(pct); }

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string pad_right(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

const char* kind_name(PairKind k) { return k == PairKind::True ? "true" : "random"; }

std::string join_ids(const std::vector<std::string>& ids) {
  if (ids.empty()) return "-";
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ',';
    out += id;
  }
  return out;
}

void render_text(std::ostringstream& out, const Report& report) {
  constexpr std::size_t kCol = 20;
  for (const auto& section : report.sections) {
    const auto& t = section.table;
    std::size_t name_w = 5;
    for (const auto& m : t.models) name_w = std::max(name_w, m.model.size());
    name_w += 2;
    out << "== " << section.label << " ==\n";
    out << pad_right("Model", name_w) << pad_left("Max similarity (%)", kCol) << pad_left("Min similarity (%)", kCol)
        << '\n';
    for (const auto& m : t.models)
      out << pad_right(m.model, name_w) << pad_left(std::to_string(rounded(m.max_pct)), kCol)
          << pad_left(std::to_string(rounded(m.min_pct)), kCol) << '\n';
    out << pad_right("wins", name_w);
    std::uint64_t max_sum = 0, min_sum = 0;
    for (const auto& m : t.models) max_sum += m.max_wins, min_sum += m.min_wins;
    out << pad_left(std::to_string(max_sum), kCol) << pad_left(std::to_string(min_sum), kCol) << '\n';
    out << pad_right("ties", name_w) << pad_left(std::to_string(t.max_ties), kCol)
        << pad_left(std::to_string(t.min_ties), kCol) << '\n';
    out << pad_right("pairs", name_w) << pad_left(std::to_string(t.max_denominator), kCol)
        << pad_left(std::to_string(t.min_denominator), kCol) << '\n';
    out << "excluded true: " << join_ids(t.excluded_true) << '\n';
    out << "excluded random: " << join_ids(t.excluded_random) << '\n';
    out << '\n';
  }
  if (!report.distributions.empty()) {
    std::size_t name_w = 5;
    for (const auto& d : report.distributions) name_w = std::max(name_w, d.model.size());
    name_w += 2;
    out << "== score distribution ==\n";
    out << pad_right("Model", name_w) << pad_right("kind", 8) << pad_left("n", 8) << pad_left("mean", 10)
        << pad_left("min", 10) << pad_left("median", 10) << pad_left("max", 10) << '\n';
    for (const auto& d : report.distributions)
      out << pad_right(d.model, name_w) << pad_right(kind_name(d.kind), 8) << pad_left(std::to_string(d.count), 8)
          << pad_left(fixed4(d.mean), 10) << pad_left(fixed4(d.min), 10) << pad_left(fixed4(d.median), 10)
          << pad_left(fixed4(d.max), 10) << '\n';
    out << '\n';
  }
  if (!report.seeds.empty()) {
    out << "== seeds ==\n";
    for (const auto& [stage, seed] : report.seeds) out << stage << '=' << seed << '\n';
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void render_csv(std::ostringstream& out, const Report& report) {
  out << "section,model,max_wins,max_pct,min_wins,min_pct,max_ties,min_ties,max_denominator,min_denominator\n";
  for (const auto& section : report.sections) {
    const auto& t = section.table;
    for (const auto& m : t.models)
      out << csv_field(section.label) << ',' << csv_field(m.model) << ',' << m.max_wins << ','
          << rounded(m.max_pct) << ',' << m.min_wins << ',' << rounded(m.min_pct) << ',' << t.max_ties << ','
          << t.min_ties << ',' << t.max_denominator << ',' << t.min_denominator << '\n';
  }
}

void render_json(std::ostringstream& out, const Report& report) {
  nlohmann::ordered_json doc;
  doc["format"] = "PATSIM-REPORT v1";
  auto& sections = doc["sections"] = nlohmann::ordered_json::array();
  for (const auto& section : report.sections) {
    const auto& t = section.table;
    nlohmann::ordered_json s;
    s["label"] = section.label;
    s["max_denominator"] = t.max_denominator;
    s["min_denominator"] = t.min_denominator;
    s["max_ties"] = t.max_ties;
    s["min_ties"] = t.min_ties;
    s["excluded_true"] = t.excluded_true;
    s["excluded_random"] = t.excluded_random;
    auto& models = s["models"] = nlohmann::ordered_json::array();
    for (const auto& m : t.models) {
      nlohmann::ordered_json row;
      row["name"] = m.model;
      row["max_wins"] = m.max_wins;
      row["max_pct"] = rounded(m.max_pct);
      row["min_wins"] = m.min_wins;
      row["min_pct"] = rounded(m.min_pct);
      models.push_back(std::move(row));
    }
    sections.push_back(std::move(s));
  }
  auto& dists = doc["score_distributions"] = nlohmann::ordered_json::array();
  for (const auto& d : report.distributions) {
    nlohmann::ordered_json row;
    row["model"] = d.model;
    row["kind"] = kind_name(d.kind);
    row["count"] = d.count;
    // shortest round-trip strings keep the bytes independent of the json library's float printer
    row["mean"] = format_double(d.mean);
    row["min"] = format_double(d.min);
    row["median"] = format_double(d.median);
    row["max"] = format_double(d.max);
    dists.push_back(std::move(row));
  }
  auto& seeds = doc["seeds"] = nlohmann::ordered_json::object();
  for (const auto& [stage, seed] : report.seeds) seeds[stage] = seed;
  out << doc.dump(2) << '\n';
}

}  // namespace

std::string render_report(const Report& report, ReportFormat format) {
  std::ostringstream out;
  switch (format) {
    case ReportFormat::Text: render_text(out, report); break;
    case ReportFormat::Csv: render_csv(out, report); break;
    case ReportFormat::Json: render_json(out, report); break;
  }
  return out.str();
}

}  // namespace patsim
