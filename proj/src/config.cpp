#include "patsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "patsim/errors.hpp"
#include "patsim/rng.hpp"

namespace patsim {

namespace {

using K = ValueKind;

constexpr ConfigKey kKeys[] = {
    {"seed", K::Unsigned, "1", "master seed"},
    {"seed.triplets", K::OptionalSeed, "", "override for the triplet stage seed"},
    {"seed.bench", K::OptionalSeed, "", "override for the benchmark stage seed"},
    {"seed.w2v", K::OptionalSeed, "", "override for word2vec training"},
    {"seed.dbow", K::OptionalSeed, "", "override for PV-DBOW training"},
    {"seed.infer", K::OptionalSeed, "", "override for PV-DBOW inference"},
    {"workers", K::Unsigned, "1", "worker threads"},
    {"deterministic", K::Boolean, "true", "single-worker training for bit-reproducible models"},

    {"corpus", K::Path, "corpus.tsv", "corpus file written by ingest, read by later stages"},
    {"ingest.cpc", K::Path, "", "CPC assignment table"},
    {"ingest.application", K::Path, "", "application table"},
    {"ingest.patent", K::Path, "", "patent table"},
    {"ingest.provenance", K::Path, "", "provenance report, defaults to <corpus>.provenance"},
    {"ingest.utility_value", K::String, "utility", "patent_type value marking utility patents"},
    {"columns.cpc.patent_id", K::String, "patent_id", ""},
    {"columns.cpc.section", K::String, "cpc_section", ""},
    {"columns.cpc.class", K::String, "cpc_class", ""},
    {"columns.cpc.subclass", K::String, "cpc_subclass", ""},
    {"columns.cpc.group", K::String, "cpc_group", ""},
    {"columns.cpc.subgroup", K::String, "", "empty when the group column holds the full symbol"},
    {"columns.cpc.type", K::String, "cpc_type", ""},
    {"columns.application.patent_id", K::String, "patent_id", ""},
    {"columns.application.filing_date", K::String, "filing_date", ""},
    {"columns.patent.patent_id", K::String, "patent_id", ""},
    {"columns.patent.patent_type", K::String, "patent_type", ""},
    {"columns.patent.abstract", K::String, "patent_abstract", ""},
    {"columns.claims.patent_id", K::String, "pgpub_id", ""},
    {"columns.claims.claim_sequence", K::String, "claim_sequence", ""},
    {"columns.claims.text", K::String, "claim_text", ""},
    {"columns.claims.dependency", K::String, "dependent", ""},
    {"columns.cases.interference_no", K::String, "interference_no", ""},
    {"columns.cases.application_id", K::String, "application_id", ""},
    {"columns.cases.filing_date", K::String, "filing_date", ""},

    {"triplets.output", K::Path, "triplets.tsv", "every triplet, in enumeration order"},
    {"triplets.manifest", K::Path, "split", "prefix for <p>.train.idx, <p>.validation.idx, <p>.meta.json"},
    {"triplets.sample_fraction", K::Real, "0.1", ""},
    {"triplets.train_fraction", K::Real, "0.7", ""},
    {"triplets.validation_fraction", K::Real, "0.3", ""},
    {"triplet_loss.margin", K::Real, "5", "handed to the sentence-encoder trainer"},
    {"triplet_loss.batch_size", K::Unsigned, "8", ""},
    {"triplet_loss.epochs", K::Unsigned, "1", ""},
    {"triplet_loss.validation_every", K::Unsigned, "1000", ""},

    {"bench.cases", K::Path, "", "interference case table"},
    {"bench.cases_delimiter", K::Delimiter, "tab", "tab, comma or a single character"},
    {"bench.claims", K::String, "", "comma-separated claim tables"},
    {"bench.first_year", K::Unsigned, "2001", ""},
    {"bench.last_year", K::Unsigned, "2014", ""},
    {"bench.reference", K::String, "vecs:reference.vecs", "model spec used to pick the representative claim pair"},
    {"bench.output", K::Path, "bench.tsv", ""},
    {"bench.provenance", K::Path, "", "defaults to <bench.output>.provenance"},

    {"w2v.dim", K::Unsigned, "300", ""},
    {"w2v.window", K::Unsigned, "5", ""},
    {"w2v.negatives", K::Unsigned, "5", ""},
    {"w2v.epochs", K::Unsigned, "5", ""},
    {"w2v.lr_start", K::Real, "0.025", ""},
    {"w2v.lr_end", K::Real, "0.0001", ""},
    {"w2v.min_count", K::Unsigned, "5", ""},
    {"w2v.unigram_power", K::Real, "0.75", ""},
    {"w2v.idf", K::IdfName, "smoothed", "smoothed or rawlog"},
    {"w2v.output", K::Path, "w2v.bin", ""},

    {"dbow.dim", K::Unsigned, "300", ""},
    {"dbow.epochs", K::Unsigned, "10", ""},
    {"dbow.negatives", K::Unsigned, "5", ""},
    {"dbow.lr_start", K::Real, "0.025", ""},
    {"dbow.lr_end", K::Real, "0.0001", ""},
    {"dbow.min_count", K::Unsigned, "5", ""},
    {"dbow.unigram_power", K::Real, "0.75", ""},
    {"dbow.infer_epochs", K::Unsigned, "10", ""},
    {"dbow.output", K::Path, "dbow.bin", ""},

    {"embed.model", K::String, "", "model spec"},
    {"embed.input", K::Path, "", "corpus, benchmark, or id/text table"},
    {"embed.output", K::Path, "vectors.vecs", ""},

    {"eval.bench", K::Path, "bench.tsv", ""},
    {"eval.models", K::String, "", "comma-separated name=spec entries"},
    {"eval.subset", K::String, "", "comma-separated model names for the restricted table"},
    {"eval.scores", K::Path, "scores.tsv", ""},
    {"eval.report", K::Path, "-", "'-' for stdout"},
    {"eval.format", K::Format, "text", "text, csv or json"},
};

constexpr std::string_view kStages[] = {"triplets", "bench", "w2v", "dbow", "infer"};

const ConfigKey* find_key(std::string_view name) {
  for (const auto& k : kKeys)
    if (k.name == name) return &k;
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
std::optional<T> parse_number(std::string_view s) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<char> parse_delimiter(std::string_view s) {
  if (s == "tab") return '\t';
  if (s == "comma") return ',';
  if (s.size() == 1 && s[0] != '\n') return s[0];
  return std::nullopt;
}

std::optional<std::string> check_value(const ConfigKey& key, std::string_view v) {
  switch (key.kind) {
    case K::String:
    case K::Path: return std::nullopt;
    case K::Unsigned:
      if (!parse_number<std::uint64_t>(v)) return "expected an unsigned integer";
      return std::nullopt;
    case K::OptionalSeed:
      if (!v.empty() && !parse_number<std::uint64_t>(v)) return "expected an unsigned integer or nothing";
      return std::nullopt;
    case K::Real: {
      const auto d = parse_number<double>(v);
      if (!d || !std::isfinite(*d)) return "expected a finite number";
      return std::nullopt;
    }
    case K::Boolean:
      if (v != "true" && v != "false") return "expected true or false";
      return std::nullopt;
    case K::Delimiter:
      if (!parse_delimiter(v)) return "expected tab, comma or one character";
      return std::nullopt;
    case K::IdfName:
      if (v != "smoothed" && v != "rawlog") return "expected smoothed or rawlog";
      return std::nullopt;
    case K::Format:
      if (v != "text" && v != "csv" && v != "json") return "expected text, csv or json";
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

std::span<const ConfigKey> config_keys() { return kKeys; }
std::span<const std::string_view> seeded_stages() { return kStages; }

RunConfig::RunConfig() {
  for (const auto& k : kKeys) values_.emplace(std::string(k.name), std::string(k.default_value));
}

RunConfig RunConfig::parse(std::istream& in, std::string_view name) {
  RunConfig config;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    const auto where = std::string(name) + ":" + std::to_string(line_no);
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected key = value");
    const auto key = trim(text.substr(0, eq));
    if (!find_key(key)) throw ConfigError(where + ": unknown key '" + std::string(key) + "'");
    config.values_[std::string(key)] = std::string(trim(text.substr(eq + 1)));
  }
  return config;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config file not found: '" + path.string() + "'");
  return parse(in, path.string());
}

void RunConfig::write(std::ostream& out) const {
  for (const auto& k : kKeys) out << k.name << " = " << values_.at(std::string(k.name)) << '\n';
}

void RunConfig::set(std::string_view key, std::string value) {
  if (!find_key(key)) throw ConfigError("unknown key '" + std::string(key) + "'");
  if (value.find('\n') != std::string::npos) throw ConfigError("value of '" + std::string(key) + "' spans lines");
  values_[std::string(key)] = std::string(trim(value));
}

const std::string& RunConfig::get(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown key '" + std::string(key) + "'");
  return it->second;
}

std::uint64_t RunConfig::get_unsigned(std::string_view key) const {
  const auto v = parse_number<std::uint64_t>(get(key));
  if (!v) throw ConfigError(std::string(key) + ": expected an unsigned integer");
  return *v;
}

double RunConfig::get_real(std::string_view key) const {
  const auto v = parse_number<double>(get(key));
  if (!v) throw ConfigError(std::string(key) + ": expected a number");
  return *v;
}

bool RunConfig::get_bool(std::string_view key) const {
  const auto& v = get(key);
  if (v != "true" && v != "false") throw ConfigError(std::string(key) + ": expected true or false");
  return v == "true";
}

char RunConfig::get_delimiter(std::string_view key) const {
  const auto d = parse_delimiter(get(key));
  if (!d) throw ConfigError(std::string(key) + ": expected tab, comma or one character");
  return *d;
}

std::vector<std::string> RunConfig::get_list(std::string_view key) const {
  std::vector<std::string> out;
  std::string_view rest = get(key);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const auto item = trim(rest.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

void RunConfig::validate() const {
  for (const auto& k : kKeys)
    if (const auto problem = check_value(k, get(k.name)))
      throw ConfigError(std::string(k.name) + " = '" + get(k.name) + "': " + *problem);
  if (get_unsigned("workers") == 0) throw ConfigError("workers must be at least 1");
  if (get_unsigned("bench.first_year") > get_unsigned("bench.last_year"))
    throw ConfigError("bench.first_year is after bench.last_year");
  for (const auto* key : {"w2v.dim", "dbow.dim"})
    if (get_unsigned(key) == 0) throw ConfigError(std::string(key) + " must be positive");
  const double f = get_real("triplets.sample_fraction");
  if (!(f > 0.0 && f <= 1.0)) throw ConfigError("triplets.sample_fraction must be in (0, 1]");
  if (!(get_real("triplet_loss.margin") > 0.0)) throw ConfigError("triplet_loss.margin must be positive");
}

std::uint64_t RunConfig::stage_seed(std::string_view stage) const {
  const auto& explicit_value = get("seed." + std::string(stage));
  if (!explicit_value.empty()) {
    const auto v = parse_number<std::uint64_t>(explicit_value);
    if (!v) throw ConfigError("seed." + std::string(stage) + ": expected an unsigned integer");
    return *v;
  }
  return derive_seed(get_unsigned("seed"), stage);
}

bool RunConfig::stage_seed_explicit(std::string_view stage) const {
  return !get("seed." + std::string(stage)).empty();
}

unsigned RunConfig::workers() const { return static_cast<unsigned>(std::max<std::uint64_t>(1, get_unsigned("workers"))); }

unsigned RunConfig::training_workers() const { return get_bool("deterministic") ? 1u : workers(); }

ColumnMap RunConfig::columns(std::string_view table) const {
  const std::string prefix = "columns." + std::string(table) + ".";
  ColumnMap map;
  for (const auto& k : kKeys)
    if (k.name.starts_with(prefix)) map.set(k.name.substr(prefix.size()), get(k.name));
  if (map.roles().empty()) throw ConfigError("no column map named '" + std::string(table) + "'");
  return map;
}

IngestColumns RunConfig::ingest_columns() const {
  IngestColumns c;
  c.cpc = columns("cpc");
  c.application = columns("application");
  c.patent = columns("patent");
  c.claims = columns("claims");
  c.utility_value = get("ingest.utility_value");
  return c;
}

}  // namespace patsim
