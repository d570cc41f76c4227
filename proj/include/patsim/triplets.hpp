#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "patsim/corpus.hpp"

namespace patsim {

struct GroupKey {
  std::string cpc_full_symbol;
  int filing_year = 0;

  friend auto operator<=>(const GroupKey&, const GroupKey&) = default;
};

/// Groups with at least two members; member ids sorted ascending.
using PatentGroups = std::map<GroupKey, std::vector<std::string>>;

PatentGroups group_corpus(const PatentCorpus& corpus);

struct PatentPair {
  std::string anchor_id;    // lexicographically smaller id
  std::string positive_id;

  friend bool operator==(const PatentPair&, const PatentPair&) = default;
};

struct PairStats {
  std::uint64_t combinations = 0;        // sum over groups of C(n, 2)
  std::uint64_t continuation_count = 0;  // pairs dropped for identical abstracts
  std::uint64_t emitted = 0;
};

/// Lazy within-group pair enumeration in (group, i, j) order. Pairs whose
/// abstracts are string-equal are skipped and counted as continuations.
class PairEnumerator {
 public:
  PairEnumerator(const PatentGroups& groups, const PatentCorpus& corpus);

  std::optional<PatentPair> next();
  const PairStats& stats() const { return stats_; }

 private:
  const PatentCorpus& corpus_;
  std::vector<const std::vector<std::string>*> groups_;
  std::size_t group_ = 0, i_ = 0, j_ = 1;
  PairStats stats_;
};

/// Materialized enumeration, parallel over groups; output order equals PairEnumerator's.
std::vector<PatentPair> enumerate_pairs(const PatentGroups& groups, const PatentCorpus& corpus,
                                        PairStats* stats = nullptr, unsigned workers = 1);

struct Triplet {
  std::string anchor_id, positive_id, negative_id;
  std::string anchor_text, positive_text, negative_text;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// Draws negatives uniformly from patents whose CPC full symbol differs from the
/// anchor's. The draw for pair i uses its own RNG stream (seed, i), so any
/// evaluation order yields the same triplets.
class NegativeSampler {
 public:
  NegativeSampler(const PatentCorpus& corpus, std::uint64_t seed);

  Triplet attach(const PatentPair& pair, std::uint64_t pair_index) const;

  /// Number of patents eligible as negatives for an anchor with this CPC symbol.
  std::uint64_t candidate_count(const std::string& cpc_full_symbol) const;

 private:
  struct Range {
    std::size_t begin = 0, size = 0;
  };

  const PatentCorpus& corpus_;
  std::uint64_t seed_;
  std::vector<const PatentRecord*> by_symbol_;  // sorted by (symbol, id)
  std::map<std::string, Range, std::less<>> ranges_;
};

std::vector<Triplet> attach_negatives(std::span<const PatentPair> pairs, const PatentCorpus& corpus,
                                      std::uint64_t seed, unsigned workers = 1);

struct SplitFractions {
  double train = 0.70;
  double validation = 0.30;
};

struct TripletSplit {
  std::vector<Triplet> train;
  std::vector<Triplet> validation;
  std::vector<std::uint64_t> train_indices;       // ascending, into the input sequence
  std::vector<std::uint64_t> validation_indices;  // ascending
  std::uint64_t seed = 0;
  double sample_fraction = 0.10;
  SplitFractions fractions;
  std::uint64_t input_count = 0;
};

/// Uniform sample without replacement of floor(fraction * n) triplets followed by
/// a disjoint train/validation split with round(train * k) training triplets.
TripletSplit sample_and_split(std::span<const Triplet> triplets, double sample_fraction,
                              SplitFractions fractions, std::uint64_t seed);

/// Checks every Triplet invariant against the corpus; throws ConsistencyError.
void validate_triplet(const Triplet& t, const PatentCorpus& corpus);

/// "PATSIM-TRIPLETS v1\tcount=<n>\tseed=<s>" then one tab-separated triplet per line.
void write_triplets(std::ostream& out, std::span<const Triplet> triplets, std::uint64_t seed);
std::vector<Triplet> read_triplets(LineSource& source, std::uint64_t* seed = nullptr);

/// Writes <prefix>.train.idx, <prefix>.validation.idx and <prefix>.meta.json.
void write_split_manifest(const std::filesystem::path& prefix, const TripletSplit& split);

}  // namespace patsim
