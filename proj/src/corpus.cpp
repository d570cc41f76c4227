#include "patsim/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>

#include "patsim/errors.hpp"
#include "patsim/text.hpp"

namespace patsim {

namespace {

bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

bool valid_section(char c) { return (c >= 'A' && c <= 'H') || c == 'Y'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '"')) s.remove_suffix(1);
  return s;
}

std::optional<AssignmentType> parse_assignment_type(std::string_view text) {
  const std::string t = ascii_lower(trim(text));
  if (t == "inventional" || t == "inventive" || t == "i") return AssignmentType::Inventional;
  if (t == "additional" || t == "a") return AssignmentType::Additional;
  return std::nullopt;
}

bool is_null_field(std::string_view s) {
  const std::string t = ascii_lower(trim(s));
  return t.empty() || t == "null" || t == "\\n" || t == "na" || t == "nan" || t == "none";
}

}  // namespace

std::string CpcAssignment::full_symbol() const {
  std::string out;
  out.reserve(4 + group.size() + 1 + subgroup.size());
  out.push_back(section);
  out += cpc_class;
  out.push_back(subclass);
  out += group;
  out.push_back('/');
  out += subgroup;
  return out;
}

std::optional<CpcAssignment> make_cpc_assignment(std::string_view patent_id, std::string_view section,
                                                 std::string_view cpc_class, std::string_view subclass,
                                                 std::string_view group, std::string_view subgroup,
                                                 std::string_view type) {
  patent_id = trim(patent_id);
  section = trim(section);
  cpc_class = trim(cpc_class);
  subclass = trim(subclass);
  group = trim(group);
  subgroup = trim(subgroup);
  if (patent_id.empty() || section.size() != 1 || !valid_section(section[0])) return std::nullopt;

  // Patents View 2023 repeats parent levels: class "A61", subclass "A61B", group "A61B17/7097".
  if (cpc_class.size() == 3 && cpc_class[0] == section[0]) cpc_class.remove_prefix(1);
  if (subclass.size() == 4 && subclass[0] == section[0]) subclass.remove_prefix(3);
  if (group.size() > 4 && group[0] == section[0] && is_digits(group.substr(1, 2)) && is_upper(group[3]))
    group.remove_prefix(4);
  if (const auto slash = group.find('/'); slash != std::string_view::npos) {
    if (!subgroup.empty() && subgroup != group.substr(slash + 1)) return std::nullopt;
    subgroup = group.substr(slash + 1);
    group = group.substr(0, slash);
  }

  if (cpc_class.size() != 2 || !is_digits(cpc_class)) return std::nullopt;
  if (subclass.size() != 1 || !is_upper(subclass[0])) return std::nullopt;
  if (!is_digits(group) || !is_digits(subgroup)) return std::nullopt;
  const auto assignment_type = parse_assignment_type(type);
  if (!assignment_type) return std::nullopt;

  CpcAssignment a;
  a.patent_id = std::string(patent_id);
  a.section = section[0];
  a.cpc_class = std::string(cpc_class);
  a.subclass = subclass[0];
  a.group = std::string(group);
  a.subgroup = std::string(subgroup);
  a.type = *assignment_type;
  return a;
}

std::optional<CpcAssignment> parse_cpc_symbol(std::string_view symbol) {
  if (symbol.size() < 7) return std::nullopt;
  return make_cpc_assignment("_", symbol.substr(0, 1), symbol.substr(1, 2), symbol.substr(3, 1),
                             symbol.substr(4), "", "inventional");
}

bool is_independent_claim(std::string_view dependency, std::string_view text) {
  if (!is_null_field(dependency)) return false;
  const std::string head = ascii_lower(utf8_prefix(text, 200));
  constexpr std::string_view marker = "claim ";
  for (std::size_t pos = head.find(marker); pos != std::string::npos; pos = head.find(marker, pos + 1)) {
    const std::size_t digit = pos + marker.size();
    if (digit < head.size() && head[digit] >= '0' && head[digit] <= '9') return false;
  }
  return true;
}

void Provenance::set(std::string_view key, std::uint64_t value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(std::string(key), value);
}

void Provenance::add(std::string_view key, std::uint64_t delta) { set(key, get(key) + delta); }

std::uint64_t Provenance::get(std::string_view key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  return 0;
}

bool Provenance::contains(std::string_view key) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const auto& kv) { return kv.first == key; });
}

std::string Provenance::render() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + "=" + std::to_string(v) + "\n";
  return out;
}

PatentCorpus::PatentCorpus(std::map<std::string, PatentRecord> records, Provenance provenance)
    : records_(std::move(records)), provenance_(std::move(provenance)) {}

const PatentRecord* PatentCorpus::find(std::string_view patent_id) const {
  const auto it = records_.find(std::string(patent_id));
  return it == records_.end() ? nullptr : &it->second;
}

const PatentRecord& PatentCorpus::at(std::string_view patent_id) const {
  if (const auto* r = find(patent_id)) return *r;
  throw ContractError("patent '" + std::string(patent_id) + "' not in corpus");
}

TableReader parse_table(std::unique_ptr<LineSource> source, const ColumnMap& columns, char delimiter) {
  return TableReader(std::move(source), columns, delimiter);
}

TypedTableReader<CpcAssignment> read_cpc_table(std::unique_ptr<LineSource> source, const ColumnMap& columns) {
  TableReader table(std::move(source), columns);
  const std::size_t id = table.role_index("patent_id"), sec = table.role_index("section"),
                    cls = table.role_index("class"), sub = table.role_index("subclass"),
                    grp = table.role_index("group"), sgr = table.role_index("subgroup"),
                    typ = table.role_index("type");
  return TypedTableReader<CpcAssignment>(
      std::move(table), [=](const Row& r, const TableReader&) {
        return make_cpc_assignment(r[id], r[sec], r[cls], r[sub], r[grp], r[sgr], r[typ]);
      });
}

TypedTableReader<ApplicationRow> read_application_table(std::unique_ptr<LineSource> source,
                                                        const ColumnMap& columns) {
  TableReader table(std::move(source), columns);
  const std::size_t id = table.role_index("patent_id"), date = table.role_index("filing_date");
  return TypedTableReader<ApplicationRow>(
      std::move(table), [=](const Row& r, const TableReader&) -> std::optional<ApplicationRow> {
        const auto patent_id = trim(r[id]);
        const auto d = parse_iso_date(trim(r[date]));
        if (patent_id.empty() || !d) return std::nullopt;
        return ApplicationRow{std::string(patent_id), *d};
      });
}

TypedTableReader<PatentRow> read_patent_table(std::unique_ptr<LineSource> source, const ColumnMap& columns,
                                              std::string utility_value) {
  TableReader table(std::move(source), columns);
  const std::size_t id = table.role_index("patent_id"), type = table.role_index("patent_type"),
                    abs = table.role_index("abstract");
  const std::string utility = ascii_lower(utility_value);
  return TypedTableReader<PatentRow>(
      std::move(table), [=](const Row& r, const TableReader&) -> std::optional<PatentRow> {
        const auto patent_id = trim(r[id]);
        if (patent_id.empty()) return std::nullopt;
        PatentRow row;
        row.patent_id = std::string(patent_id);
        row.type = ascii_lower(trim(r[type])) == utility ? PatentType::Utility : PatentType::Other;
        row.abstract = normalize_text(r[abs]);
        return row;
      });
}

TypedTableReader<ClaimRecord> parse_claims(std::unique_ptr<LineSource> source, const ColumnMap& columns) {
  TableReader table(std::move(source), columns);
  const std::size_t id = table.role_index("patent_id"), seq = table.role_index("claim_sequence"),
                    txt = table.role_index("text"), dep = table.role_index("dependency");
  return TypedTableReader<ClaimRecord>(
      std::move(table), [=](const Row& r, const TableReader&) -> std::optional<ClaimRecord> {
        const auto patent_id = trim(r[id]);
        const auto seq_text = trim(r[seq]);
        int sequence = 0;
        const auto [ptr, ec] = std::from_chars(seq_text.data(), seq_text.data() + seq_text.size(), sequence);
        if (patent_id.empty() || ec != std::errc{} || ptr != seq_text.data() + seq_text.size() || sequence < 1)
          return std::nullopt;
        ClaimRecord claim;
        claim.patent_id = std::string(patent_id);
        claim.claim_sequence = sequence;
        claim.text = normalize_text(r[txt]);
        claim.is_independent = is_independent_claim(r[dep], claim.text);
        return claim;
      });
}

void CorpusBuilder::add_cpc(const CpcAssignment& assignment) {
  if (sealed_) throw ContractError("CorpusBuilder: CPC row added after seal_cpc()");
  auto& list = cpc_[assignment.patent_id];
  if (std::find(list.begin(), list.end(), assignment) == list.end()) list.push_back(assignment);
}

void CorpusBuilder::seal_cpc() {
  sealed_ = true;
  for (const auto& [id, list] : cpc_)
    if (list.size() == 1 && list.front().type == AssignmentType::Inventional) survivors_.insert(id);
  // Drop anything buffered before sealing that can no longer survive.
  std::erase_if(filing_dates_, [&](const auto& kv) { return !survivors_.contains(kv.first); });
  std::erase_if(patents_, [&](const auto& kv) { return !survivors_.contains(kv.first); });
}

bool CorpusBuilder::wanted(const std::string& patent_id) const {
  return !sealed_ || survivors_.contains(patent_id);
}

void CorpusBuilder::add_application(const ApplicationRow& row) {
  if (!wanted(row.patent_id)) return;
  const auto [it, inserted] = filing_dates_.emplace(row.patent_id, row.filing_date);
  if (!inserted && it->second != row.filing_date) {
    // Report the conflict independent of arrival order.
    const auto [lo, hi] = std::minmax(it->second, row.filing_date);
    throw IngestConflict(row.patent_id, "filing dates " + lo.iso() + " and " + hi.iso());
  }
}

void CorpusBuilder::add_patent(const PatentRow& row) {
  if (!wanted(row.patent_id)) return;
  const auto [it, inserted] = patents_.emplace(row.patent_id, row);
  if (!inserted && (it->second.abstract != row.abstract || it->second.type != row.type))
    throw IngestConflict(row.patent_id, "conflicting abstracts in patent table");
}

PatentCorpus CorpusBuilder::build() const {
  Provenance p;
  std::uint64_t dual = 0, non_inventional = 0, no_date = 0, missing_patent = 0, non_utility = 0,
                no_abstract = 0;
  std::map<std::string, PatentRecord> records;
  for (const auto& [id, list] : cpc_) {
    if (list.size() != 1) {
      ++dual;
      continue;
    }
    if (list.front().type != AssignmentType::Inventional) {
      ++non_inventional;
      continue;
    }
    const auto date = filing_dates_.find(id);
    if (date == filing_dates_.end()) {
      ++no_date;
      continue;
    }
    const auto patent = patents_.find(id);
    if (patent == patents_.end()) {
      ++missing_patent;
      continue;
    }
    if (patent->second.type != PatentType::Utility) {
      ++non_utility;
      continue;
    }
    if (patent->second.abstract.empty()) {
      ++no_abstract;
      continue;
    }
    PatentRecord r;
    r.patent_id = id;
    r.filing_date = date->second;
    r.filing_year = date->second.year;
    r.abstract = patent->second.abstract;
    r.patent_type = PatentType::Utility;
    r.cpc = list;
    records.emplace(id, std::move(r));
  }
  p.set("input_patents", cpc_.size());
  p.set("dual", dual);
  p.set("non_inventional", non_inventional);
  p.set("no_filing_date", no_date);
  p.set("missing_patent_row", missing_patent);
  p.set("non_utility", non_utility);
  p.set("no_abstract", no_abstract);
  p.set("clean", records.size());
  return PatentCorpus(std::move(records), std::move(p));
}

PatentCorpus build_clean_corpus(std::span<const CpcAssignment> cpc_rows,
                                std::span<const ApplicationRow> application_rows,
                                std::span<const PatentRow> patent_rows) {
  CorpusBuilder builder;
  for (const auto& row : cpc_rows) builder.add_cpc(row);
  builder.seal_cpc();
  for (const auto& row : application_rows) builder.add_application(row);
  for (const auto& row : patent_rows) builder.add_patent(row);
  return builder.build();
}

void write_corpus(std::ostream& out, const PatentCorpus& corpus) {
  out << "PATSIM-CORPUS v1\tcount=" << corpus.size() << '\n';
  for (const auto& [id, r] : corpus.records())
    out << id << '\t' << r.filing_date.iso() << '\t' << r.primary_cpc().full_symbol() << '\t' << r.abstract
        << '\n';
}

PatentCorpus read_corpus(LineSource& source) {
  std::string line;
  if (!source.next_line(line)) throw FormatError("'" + source.name() + "': empty corpus file", 1);
  constexpr std::string_view magic = "PATSIM-CORPUS v1\tcount=";
  if (!line.starts_with(magic)) throw FormatError("'" + source.name() + "': not a PATSIM-CORPUS v1 file", 1);
  std::uint64_t count = 0;
  {
    const std::string_view n = std::string_view(line).substr(magic.size());
    const auto [ptr, ec] = std::from_chars(n.data(), n.data() + n.size(), count);
    if (ec != std::errc{} || ptr != n.data() + n.size()) throw FormatError("bad corpus count", 1);
  }
  std::map<std::string, PatentRecord> records;
  std::uint64_t line_no = 1;
  while (source.next_line(line)) {
    ++line_no;
    std::string_view rest = line;
    std::string_view fields[3];
    for (auto& f : fields) {
      const auto tab = rest.find('\t');
      if (tab == std::string_view::npos) throw FormatError("corpus line has fewer than 4 fields", line_no);
      f = rest.substr(0, tab);
      rest.remove_prefix(tab + 1);
    }
    const auto date = parse_iso_date(fields[1]);
    auto cpc = parse_cpc_symbol(fields[2]);
    if (fields[0].empty() || !date || !cpc) throw FormatError("invalid corpus record", line_no);
    if (rest.find('\t') != std::string_view::npos) throw FormatError("tab inside abstract", line_no);
    PatentRecord r;
    r.patent_id = std::string(fields[0]);
    r.filing_date = *date;
    r.filing_year = date->year;
    r.abstract = std::string(rest);
    cpc->patent_id = r.patent_id;
    r.cpc.push_back(std::move(*cpc));
    if (!records.emplace(r.patent_id, r).second) throw FormatError("duplicate patent id " + r.patent_id, line_no);
  }
  if (records.size() != count)
    throw FormatError("corpus header count=" + std::to_string(count) + " but " + std::to_string(records.size()) +
                          " records",
                      0);
  Provenance p;
  p.set("loaded", records.size());
  return PatentCorpus(std::move(records), std::move(p));
}

}  // namespace patsim
