#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "patsim/date.hpp"
#include "patsim/table.hpp"

namespace patsim {

enum class AssignmentType { Inventional, Additional };
enum class PatentType { Utility, Other };

struct CpcAssignment {
  std::string patent_id;
  char section = 'A';
  std::string cpc_class;  // two decimal digits
  char subclass = 'A';
  std::string group;
  std::string subgroup;
  AssignmentType type = AssignmentType::Inventional;

  /// section + class + subclass + group + "/" + subgroup, e.g. "A61B17/7097".
  std::string full_symbol() const;

  friend bool operator==(const CpcAssignment&, const CpcAssignment&) = default;
};

/// Builds an assignment from table fields. Accepts both the split layout
/// (class "61", subclass "B", group "17", subgroup "7097") and the Patents View
/// 2023 layout where each level repeats its parents (class "A61", subclass
/// "A61B", group "A61B17/7097"). Returns nullopt on any invalid component.
std::optional<CpcAssignment> make_cpc_assignment(std::string_view patent_id, std::string_view section,
                                                 std::string_view cpc_class, std::string_view subclass,
                                                 std::string_view group, std::string_view subgroup,
                                                 std::string_view type);

/// Parses a full symbol such as "A61B17/7097" (as written by full_symbol()).
std::optional<CpcAssignment> parse_cpc_symbol(std::string_view symbol);

struct ApplicationRow {
  std::string patent_id;
  Date filing_date;
};

struct PatentRow {
  std::string patent_id;
  PatentType type = PatentType::Other;
  std::string abstract;  // normalized
};

struct PatentRecord {
  std::string patent_id;
  Date filing_date;
  int filing_year = 0;
  std::string abstract;
  PatentType patent_type = PatentType::Utility;
  std::vector<CpcAssignment> cpc;

  /// The single CPC assignment of a clean-corpus record.
  const CpcAssignment& primary_cpc() const { return cpc.front(); }

  friend bool operator==(const PatentRecord&, const PatentRecord&) = default;
};

struct ClaimRecord {
  std::string patent_id;
  int claim_sequence = 1;
  std::string text;
  bool is_independent = true;

  /// Stable identifier "<patent_id>:<claim_sequence>", used as the embedding id.
  std::string key() const { return patent_id + ":" + std::to_string(claim_sequence); }

  friend bool operator==(const ClaimRecord&, const ClaimRecord&) = default;
};

/// Independent iff the dependency field is empty/null and the lowercased text has
/// no "claim <digits>" reference within its first 200 code points.
bool is_independent_claim(std::string_view dependency, std::string_view text);

/// Ordered key=value counters.
class Provenance {
 public:
  void set(std::string_view key, std::uint64_t value);
  void add(std::string_view key, std::uint64_t delta);
  std::uint64_t get(std::string_view key) const;
  bool contains(std::string_view key) const;

  const std::vector<std::pair<std::string, std::uint64_t>>& entries() const { return entries_; }

  /// One "key=value" line per counter.
  std::string render() const;

  friend bool operator==(const Provenance&, const Provenance&) = default;

 private:
  std::vector<std::pair<std::string, std::uint64_t>> entries_;
};

/// Immutable clean corpus, ordered by patent id.
class PatentCorpus {
 public:
  PatentCorpus() = default;
  PatentCorpus(std::map<std::string, PatentRecord> records, Provenance provenance);

  const std::map<std::string, PatentRecord>& records() const { return records_; }
  const Provenance& provenance() const { return provenance_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  const PatentRecord* find(std::string_view patent_id) const;
  const PatentRecord& at(std::string_view patent_id) const;

 private:
  std::map<std::string, PatentRecord> records_;
  Provenance provenance_;
};

/// Column names for the ingest tables. Defaults target the 2023 Patents View dumps
/// (g_cpc_current, g_application, g_patent, pg_claims).
struct IngestColumns {
  ColumnMap cpc{{"patent_id", "patent_id"}, {"section", "cpc_section"}, {"class", "cpc_class"},
                {"subclass", "cpc_subclass"}, {"group", "cpc_group"}, {"subgroup", ""},
                {"type", "cpc_type"}};
  ColumnMap application{{"patent_id", "patent_id"}, {"filing_date", "filing_date"}};
  ColumnMap patent{{"patent_id", "patent_id"}, {"patent_type", "patent_type"},
                   {"abstract", "patent_abstract"}};
  ColumnMap claims{{"patent_id", "pgpub_id"}, {"claim_sequence", "claim_sequence"},
                   {"text", "claim_text"}, {"dependency", "dependent"}};
  /// Value of the patent-type column that marks a utility patent (case-insensitive).
  std::string utility_value = "utility";
};

/// Untyped streaming reader over one table.
TableReader parse_table(std::unique_ptr<LineSource> source, const ColumnMap& columns, char delimiter = '\t');

TypedTableReader<CpcAssignment> read_cpc_table(std::unique_ptr<LineSource> source, const ColumnMap& columns);
TypedTableReader<ApplicationRow> read_application_table(std::unique_ptr<LineSource> source,
                                                        const ColumnMap& columns);
TypedTableReader<PatentRow> read_patent_table(std::unique_ptr<LineSource> source, const ColumnMap& columns,
                                              std::string utility_value = "utility");
/// Claims with normalized text and independence computed by is_independent_claim.
TypedTableReader<ClaimRecord> parse_claims(std::unique_ptr<LineSource> source, const ColumnMap& columns);

/// Incremental clean-corpus construction. Feed all CPC rows first; after
/// seal_cpc(), application and patent rows for patents that already failed the
/// CPC filters are discarded on arrival, which bounds memory on full dumps.
/// The result does not depend on the order rows are fed within each table.
class CorpusBuilder {
 public:
  void add_cpc(const CpcAssignment& assignment);
  void seal_cpc();
  void add_application(const ApplicationRow& row);
  void add_patent(const PatentRow& row);

  /// Applies single-CPC -> inventional -> filing-date -> utility -> abstract filters.
  PatentCorpus build() const;

 private:
  bool wanted(const std::string& patent_id) const;

  std::unordered_map<std::string, std::vector<CpcAssignment>> cpc_;
  std::unordered_set<std::string> survivors_;
  bool sealed_ = false;
  std::unordered_map<std::string, Date> filing_dates_;
  std::unordered_map<std::string, PatentRow> patents_;
};

PatentCorpus build_clean_corpus(std::span<const CpcAssignment> cpc_rows,
                                std::span<const ApplicationRow> application_rows,
                                std::span<const PatentRow> patent_rows);

/// "PATSIM-CORPUS v1\tcount=<n>" followed by patent_id, filing_date, cpc symbol, abstract.
void write_corpus(std::ostream& out, const PatentCorpus& corpus);
PatentCorpus read_corpus(LineSource& source);

}  // namespace patsim
