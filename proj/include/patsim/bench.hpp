#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "patsim/corpus.hpp"
#include "patsim/vector.hpp"

namespace patsim {

/// One (interference, application) row of the case table (long layout).
struct CaseRow {
  std::string interference_no;
  std::string application_id;
  Date filing_date;
};

inline ColumnMap default_case_columns() {
  return ColumnMap{{"interference_no", "interference_no"},
                   {"application_id", "application_id"},
                   {"filing_date", "filing_date"}};
}

TypedTableReader<CaseRow> read_case_table(std::unique_ptr<LineSource> source, const ColumnMap& columns,
                                          char delimiter = '\t');

struct InterferenceCase {
  std::string interference_no;
  std::vector<std::string> application_ids;  // ascending
  std::vector<Date> filing_dates;            // parallel to application_ids
};

/// Groups rows by interference number (ascending); repeated application rows collapse.
/// Conflicting filing dates for one application throw IngestConflict.
std::vector<InterferenceCase> group_case_rows(std::span<const CaseRow> rows);

/// application id -> all of its claims (any order).
using ClaimsIndex = std::map<std::string, std::vector<ClaimRecord>, std::less<>>;

ClaimsIndex index_claims(std::span<const ClaimRecord> claims);

struct YearWindow {
  int first_year = 2001;
  int last_year = 2014;

  bool contains(const Date& d) const { return d.year >= first_year && d.year <= last_year; }
};

struct CaseFunnel {
  std::uint64_t input = 0;
  std::uint64_t window = 0;      // removed: an application filed outside the window
  std::uint64_t multiparty = 0;  // removed: not exactly two applications
  std::uint64_t no_claims = 0;   // removed: an application without usable claims
  std::uint64_t kept = 0;
};

/// Window, then two-party, then claims availability.
std::vector<InterferenceCase> filter_cases(std::span<const InterferenceCase> raw, const ClaimsIndex& claims,
                                           YearWindow window = {}, CaseFunnel* funnel = nullptr);

/// Independent claims without "canceled"/"cancelled" (case-insensitive), de-duplicated
/// by exact text keeping the lowest claim_sequence; result ordered by claim_sequence.
std::vector<ClaimRecord> usable_claims(std::span<const ClaimRecord> claims);

struct CandidatePair {
  std::string interference_no;
  ClaimRecord claim_a;  // from the case's first application
  ClaimRecord claim_b;  // from the second
};

/// m x n cross product of the two applications' usable claims.
/// Throws ConsistencyError if the case is not two-party or a side has no usable claim.
std::vector<CandidatePair> enumerate_cross_pairs(const InterferenceCase& c, const ClaimsIndex& claims);

struct ClaimPair {
  std::string interference_no;
  std::string partner_interference_no;  // empty for true pairs
  ClaimRecord claim_a;
  ClaimRecord claim_b;
  std::optional<double> selection_score;  // reference cosine

  bool is_random() const { return !partner_interference_no.empty(); }
  std::string pair_id() const {
    return is_random() ? interference_no + "~" + partner_interference_no : interference_no;
  }
};

/// argmax of reference cosine over candidates; equal scores resolve to the smallest
/// (patent_id_a, claim_sequence_a, patent_id_b, claim_sequence_b).
/// Throws SelectionError naming the claim if the reference cannot embed it.
ClaimPair select_representative_pair(std::span<const CandidatePair> candidates, const Embedder& reference);

/// For each true pair i: claim_a of i with claim_b of a uniformly drawn j != i.
std::vector<ClaimPair> make_random_pairs(std::span<const ClaimPair> true_pairs, std::uint64_t seed);

struct BenchmarkDataset {
  std::vector<ClaimPair> true_pairs;
  std::vector<ClaimPair> random_pairs;
  std::uint64_t seed = 0;
  std::string reference;
};

struct BenchFunnel {
  CaseFunnel cases;
  std::uint64_t applications = 0;   // unique applications in kept cases
  std::uint64_t unique_claims = 0;  // usable claims over those applications
  std::uint64_t candidates = 0;     // cross pairs over kept cases

  Provenance provenance() const;
};

BenchmarkDataset build_benchmark(std::span<const InterferenceCase> raw, const ClaimsIndex& claims,
                                 const Embedder& reference, YearWindow window, std::uint64_t seed,
                                 BenchFunnel* funnel = nullptr, unsigned workers = 1);

/// "PATSIM-BENCH v1\ttrue=<n>\trandom=<m>\tseed=<s>\treference=<name>", then true-pair
/// records ("T") followed by random-pair records ("R"):
/// kind, interference_no, partner_interference_no ("-" for true pairs), patent_a, seq_a,
/// patent_b, seq_b, selection_score ("NA" if unscored), claim_a text, claim_b text.
void write_benchmark(std::ostream& out, const BenchmarkDataset& bench);
BenchmarkDataset read_benchmark(LineSource& source);

}  // namespace patsim
