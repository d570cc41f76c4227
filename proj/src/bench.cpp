#include "patsim/bench.hpp"

#include <algorithm>
#include <charconv>
#include <mutex>
#include <ostream>
#include <set>
#include <unordered_map>

#include "patsim/errors.hpp"
#include "patsim/external_vectors.hpp"
#include "patsim/rng.hpp"
#include "patsim/text.hpp"
#include "parallel.hpp"

namespace patsim {

TypedTableReader<CaseRow> read_case_table(std::unique_ptr<LineSource> source, const ColumnMap& columns,
                                          char delimiter) {
  TableReader table(std::move(source), columns, delimiter);
  const std::size_t no = table.role_index("interference_no"), app = table.role_index("application_id"),
                    date = table.role_index("filing_date");
  return TypedTableReader<CaseRow>(std::move(table),
                                   [=](const Row& r, const TableReader&) -> std::optional<CaseRow> {
                                     const auto d = parse_iso_date(r[date]);
                                     if (r[no].empty() || r[app].empty() || !d) return std::nullopt;
                                     return CaseRow{r[no], r[app], *d};
                                   });
}

std::vector<InterferenceCase> group_case_rows(std::span<const CaseRow> rows) {
  std::map<std::string, std::map<std::string, Date>> grouped;
  for (const auto& row : rows) {
    auto& apps = grouped[row.interference_no];
    const auto [it, inserted] = apps.emplace(row.application_id, row.filing_date);
    if (!inserted && it->second != row.filing_date)
      throw IngestConflict(row.application_id, "conflicting filing dates in interference " + row.interference_no);
  }
  std::vector<InterferenceCase> out;
  out.reserve(grouped.size());
  for (auto& [no, apps] : grouped) {
    InterferenceCase c;
    c.interference_no = no;
    for (const auto& [id, date] : apps) {
      c.application_ids.push_back(id);
      c.filing_dates.push_back(date);
    }
    out.push_back(std::move(c));
  }
  return out;
}

ClaimsIndex index_claims(std::span<const ClaimRecord> claims) {
  ClaimsIndex index;
  for (const auto& c : claims) index[c.patent_id].push_back(c);
  return index;
}

std::vector<ClaimRecord> usable_claims(std::span<const ClaimRecord> claims) {
  std::vector<ClaimRecord> sorted(claims.begin(), claims.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ClaimRecord& a, const ClaimRecord& b) { return a.claim_sequence < b.claim_sequence; });
  std::vector<ClaimRecord> out;
  std::set<std::string_view> seen;
  for (const auto& c : sorted) {
    if (!c.is_independent) continue;
    const std::string lower = ascii_lower(c.text);
    if (lower.find("canceled") != std::string::npos || lower.find("cancelled") != std::string::npos) continue;
    if (!seen.insert(c.text).second) continue;
    out.push_back(c);
  }
  return out;
}

namespace {

std::vector<ClaimRecord> usable_for(const ClaimsIndex& claims, const std::string& application_id) {
  const auto it = claims.find(application_id);
  if (it == claims.end()) return {};
  return usable_claims(it->second);
}

}  // namespace

std::vector<InterferenceCase> filter_cases(std::span<const InterferenceCase> raw, const ClaimsIndex& claims,
                                           YearWindow window, CaseFunnel* funnel) {
  CaseFunnel f;
  f.input = raw.size();
  std::vector<InterferenceCase> out;
  for (const auto& c : raw) {
    if (c.filing_dates.empty() ||
        !std::all_of(c.filing_dates.begin(), c.filing_dates.end(), [&](const Date& d) { return window.contains(d); })) {
      ++f.window;
      continue;
    }
    if (c.application_ids.size() != 2) {
      ++f.multiparty;
      continue;
    }
    if (usable_for(claims, c.application_ids[0]).empty() || usable_for(claims, c.application_ids[1]).empty()) {
      ++f.no_claims;
      continue;
    }
    out.push_back(c);
  }
  f.kept = out.size();
  if (funnel != nullptr) *funnel = f;
  return out;
}

std::vector<CandidatePair> enumerate_cross_pairs(const InterferenceCase& c, const ClaimsIndex& claims) {
  if (c.application_ids.size() != 2)
    throw ConsistencyError("interference " + c.interference_no + " is not a two-party case");
  const auto a = usable_for(claims, c.application_ids[0]);
  const auto b = usable_for(claims, c.application_ids[1]);
  if (a.empty() || b.empty())
    throw ConsistencyError("interference " + c.interference_no + " has an application without usable claims");
  std::vector<CandidatePair> out;
  out.reserve(a.size() * b.size());
  for (const auto& ca : a)
    for (const auto& cb : b) out.push_back(CandidatePair{c.interference_no, ca, cb});
  return out;
}

namespace {

auto tie_key(const CandidatePair& p) {
  return std::tie(p.claim_a.patent_id, p.claim_a.claim_sequence, p.claim_b.patent_id, p.claim_b.claim_sequence);
}

}  // namespace

ClaimPair select_representative_pair(std::span<const CandidatePair> candidates, const Embedder& reference) {
  if (candidates.empty()) throw ContractError("select_representative_pair needs at least one candidate");
  std::unordered_map<std::string, DenseVector> cache;
  auto vector_of = [&](const ClaimRecord& claim) -> const DenseVector& {
    const std::string key = claim.key();
    if (const auto it = cache.find(key); it != cache.end()) return it->second;
    try {
      return cache.emplace(key, reference.embed(Document{key, claim.text})).first->second;
    } catch (const Error& e) {
      throw SelectionError("reference embedder '" + std::string(reference.name()) + "' failed on claim " + key +
                           ": " + e.what());
    }
  };

  const CandidatePair* best = nullptr;
  double best_score = 0.0;
  for (const auto& candidate : candidates) {
    double score = 0.0;
    try {
      score = cosine(vector_of(candidate.claim_a), vector_of(candidate.claim_b));
    } catch (const UndefinedSimilarity& e) {
      throw SelectionError("undefined similarity for claims " + candidate.claim_a.key() + " / " +
                           candidate.claim_b.key() + ": " + e.what());
    }
    if (best == nullptr || score > best_score || (score == best_score && tie_key(candidate) < tie_key(*best))) {
      best = &candidate;
      best_score = score;
    }
  }
  return ClaimPair{best->interference_no, "", best->claim_a, best->claim_b, best_score};
}

std::vector<ClaimPair> make_random_pairs(std::span<const ClaimPair> true_pairs, std::uint64_t seed) {
  const std::size_t n = true_pairs.size();
  if (n < 2) throw ParameterError("random pairs need at least two interferences");
  const std::uint64_t key = derive_seed(seed, "bench.random");
  std::vector<ClaimPair> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(key, i);
    std::size_t j = static_cast<std::size_t>(rng.uniform(n - 1));
    if (j >= i) ++j;
    const auto& a = true_pairs[i];
    const auto& b = true_pairs[j];
    if (a.interference_no == b.interference_no)
      throw ConsistencyError("duplicate interference " + a.interference_no + " among true pairs");
    out.push_back(ClaimPair{a.interference_no, b.interference_no, a.claim_a, b.claim_b, std::nullopt});
  }
  return out;
}

Provenance BenchFunnel::provenance() const {
  Provenance p;
  p.set("cases_input", cases.input);
  p.set("removed_window", cases.window);
  p.set("removed_multiparty", cases.multiparty);
  p.set("removed_no_claims", cases.no_claims);
  p.set("cases_kept", cases.kept);
  p.set("applications", applications);
  p.set("unique_claims", unique_claims);
  p.set("candidate_pairs", candidates);
  return p;
}

BenchmarkDataset build_benchmark(std::span<const InterferenceCase> raw, const ClaimsIndex& claims,
                                 const Embedder& reference, YearWindow window, std::uint64_t seed,
                                 BenchFunnel* funnel, unsigned workers) {
  BenchFunnel f;
  const auto cases = filter_cases(raw, claims, window, &f.cases);

  std::set<std::string> applications;
  for (const auto& c : cases) applications.insert(c.application_ids.begin(), c.application_ids.end());
  f.applications = applications.size();
  for (const auto& app : applications) f.unique_claims += usable_for(claims, app).size();

  std::vector<ClaimPair> selected(cases.size());
  std::vector<std::uint64_t> candidate_counts(cases.size(), 0);
  // Report the failure of the lowest case index so the error does not depend on scheduling.
  std::mutex error_mutex;
  std::size_t error_index = cases.size();
  std::exception_ptr error;
  detail::parallel_for(cases.size(), workers, [&](std::size_t i) {
    try {
      const auto candidates = enumerate_cross_pairs(cases[i], claims);
      candidate_counts[i] = candidates.size();
      selected[i] = select_representative_pair(candidates, reference);
    } catch (...) {
      const std::lock_guard lock(error_mutex);
      if (i < error_index) {
        error_index = i;
        error = std::current_exception();
      }
    }
  });
  if (error) std::rethrow_exception(error);
  for (auto c : candidate_counts) f.candidates += c;

  BenchmarkDataset bench;
  bench.seed = seed;
  bench.reference = std::string(reference.name());
  bench.true_pairs = std::move(selected);
  if (bench.true_pairs.size() >= 2) {
    bench.random_pairs = make_random_pairs(bench.true_pairs, seed);
    for (auto& pair : bench.random_pairs) {
      try {
        pair.selection_score = cosine(reference.embed(Document{pair.claim_a.key(), pair.claim_a.text}),
                                      reference.embed(Document{pair.claim_b.key(), pair.claim_b.text}));
      } catch (const Error&) {
        pair.selection_score.reset();
      }
    }
  }
  if (funnel != nullptr) *funnel = f;
  return bench;
}

namespace {

void write_pair(std::ostream& out, const ClaimPair& p) {
  out << (p.is_random() ? 'R' : 'T') << '\t' << p.interference_no << '\t'
      << (p.is_random() ? p.partner_interference_no : "-") << '\t' << p.claim_a.patent_id << '\t'
      << p.claim_a.claim_sequence << '\t' << p.claim_b.patent_id << '\t' << p.claim_b.claim_sequence << '\t'
      << (p.selection_score ? format_double(*p.selection_score) : "NA") << '\t' << p.claim_a.text << '\t'
      << p.claim_b.text << '\n';
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t pos; (pos = line.find('\t', start)) != std::string_view::npos; start = pos + 1)
    out.push_back(line.substr(start, pos - start));
  out.push_back(line.substr(start));
  return out;
}

template <class T>
T parse_number(std::string_view s, std::uint64_t line) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw FormatError("PATSIM-BENCH: bad number '" + std::string(s) + "'", line);
  return v;
}

}  // namespace

void write_benchmark(std::ostream& out, const BenchmarkDataset& bench) {
  out << "PATSIM-BENCH v1\ttrue=" << bench.true_pairs.size() << "\trandom=" << bench.random_pairs.size()
      << "\tseed=" << bench.seed << "\treference=" << bench.reference << '\n';
  for (const auto& p : bench.true_pairs) write_pair(out, p);
  for (const auto& p : bench.random_pairs) write_pair(out, p);
}

BenchmarkDataset read_benchmark(LineSource& source) {
  std::string line;
  if (!source.next_line(line)) throw FormatError("PATSIM-BENCH: empty file", 1);
  const auto header = split_tabs(line);
  if (header.size() != 5 || header[0] != "PATSIM-BENCH v1" || !header[1].starts_with("true=") ||
      !header[2].starts_with("random=") || !header[3].starts_with("seed=") || !header[4].starts_with("reference="))
    throw FormatError("not a PATSIM-BENCH v1 file", 1);
  BenchmarkDataset bench;
  const auto n_true = parse_number<std::size_t>(header[1].substr(5), 1);
  const auto n_random = parse_number<std::size_t>(header[2].substr(7), 1);
  bench.seed = parse_number<std::uint64_t>(header[3].substr(5), 1);
  bench.reference = std::string(header[4].substr(10));

  std::uint64_t line_no = 1;
  while (source.next_line(line)) {
    ++line_no;
    const auto f = split_tabs(line);
    if (f.size() != 10 || (f[0] != "T" && f[0] != "R")) throw FormatError("PATSIM-BENCH: malformed record", line_no);
    const bool random = f[0] == "R";
    if (!random && !bench.random_pairs.empty())
      throw FormatError("PATSIM-BENCH: true-pair record after random section", line_no);
    ClaimPair p;
    p.interference_no = std::string(f[1]);
    if (random) p.partner_interference_no = std::string(f[2]);
    p.claim_a = ClaimRecord{std::string(f[3]), parse_number<int>(f[4], line_no), std::string(f[8]), true};
    p.claim_b = ClaimRecord{std::string(f[5]), parse_number<int>(f[6], line_no), std::string(f[9]), true};
    if (f[7] != "NA") p.selection_score = parse_number<double>(f[7], line_no);
    (random ? bench.random_pairs : bench.true_pairs).push_back(std::move(p));
  }
  if (bench.true_pairs.size() != n_true || bench.random_pairs.size() != n_random)
    throw FormatError("PATSIM-BENCH: record counts do not match header", 0);
  return bench;
}

}  // namespace patsim
