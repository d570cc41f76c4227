#include "patsim/triplets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "patsim/errors.hpp"
#include "patsim/rng.hpp"
#include "parallel.hpp"

namespace patsim {

PatentGroups group_corpus(const PatentCorpus& corpus) {
  PatentGroups all;
  for (const auto& [id, r] : corpus.records())
    all[GroupKey{r.primary_cpc().full_symbol(), r.filing_year}].push_back(id);
  std::erase_if(all, [](const auto& kv) { return kv.second.size() < 2; });
  // corpus records are id-ordered, so member lists are already sorted
  return all;
}

PairEnumerator::PairEnumerator(const PatentGroups& groups, const PatentCorpus& corpus) : corpus_(corpus) {
  groups_.reserve(groups.size());
  for (const auto& [key, ids] : groups) {
    groups_.push_back(&ids);
    stats_.combinations += ids.size() * (ids.size() - 1) / 2;
  }
}

std::optional<PatentPair> PairEnumerator::next() {
  while (group_ < groups_.size()) {
    const auto& ids = *groups_[group_];
    if (i_ + 1 >= ids.size()) {
      ++group_;
      i_ = 0;
      j_ = 1;
      continue;
    }
    const std::string& a = ids[i_];
    const std::string& b = ids[j_];
    if (++j_ >= ids.size()) {
      ++i_;
      j_ = i_ + 1;
    }
    if (corpus_.at(a).abstract == corpus_.at(b).abstract) {
      ++stats_.continuation_count;
      continue;
    }
    ++stats_.emitted;
    return PatentPair{a, b};
  }
  return std::nullopt;
}

namespace {

void enumerate_group(const std::vector<std::string>& ids, const PatentCorpus& corpus,
                     std::vector<PatentPair>& out, std::uint64_t& continuations) {
  std::vector<const std::string*> abstracts;
  abstracts.reserve(ids.size());
  for (const auto& id : ids) abstracts.push_back(&corpus.at(id).abstract);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      if (*abstracts[i] == *abstracts[j]) {
        ++continuations;
        continue;
      }
      out.push_back(PatentPair{ids[i], ids[j]});
    }
  }
}

}  // namespace

std::vector<PatentPair> enumerate_pairs(const PatentGroups& groups, const PatentCorpus& corpus, PairStats* stats,
                                        unsigned workers) {
  std::vector<const std::vector<std::string>*> lists;
  lists.reserve(groups.size());
  PairStats local;
  for (const auto& [key, ids] : groups) {
    lists.push_back(&ids);
    local.combinations += ids.size() * (ids.size() - 1) / 2;
  }
  std::vector<std::vector<PatentPair>> per_group(lists.size());
  std::vector<std::uint64_t> continuations(lists.size(), 0);
  detail::parallel_for(lists.size(), workers,
               [&](std::size_t g) { enumerate_group(*lists[g], corpus, per_group[g], continuations[g]); });

  std::vector<PatentPair> out;
  out.reserve(local.combinations);
  for (std::size_t g = 0; g < lists.size(); ++g) {
    local.continuation_count += continuations[g];
    std::move(per_group[g].begin(), per_group[g].end(), std::back_inserter(out));
  }
  local.emitted = out.size();
  if (stats != nullptr) *stats = local;
  return out;
}

NegativeSampler::NegativeSampler(const PatentCorpus& corpus, std::uint64_t seed)
    : corpus_(corpus), seed_(derive_seed(seed, "triplets.negatives")) {
  by_symbol_.reserve(corpus.size());
  std::vector<std::pair<std::string, const PatentRecord*>> keyed;
  keyed.reserve(corpus.size());
  for (const auto& [id, r] : corpus.records()) keyed.emplace_back(r.primary_cpc().full_symbol(), &r);
  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    auto& range = ranges_[keyed[i].first];
    if (range.size == 0) range.begin = i;
    ++range.size;
    by_symbol_.push_back(keyed[i].second);
  }
}

std::uint64_t NegativeSampler::candidate_count(const std::string& cpc_full_symbol) const {
  const auto it = ranges_.find(cpc_full_symbol);
  return by_symbol_.size() - (it == ranges_.end() ? 0 : it->second.size);
}

Triplet NegativeSampler::attach(const PatentPair& pair, std::uint64_t pair_index) const {
  const PatentRecord& anchor = corpus_.at(pair.anchor_id);
  const PatentRecord& positive = corpus_.at(pair.positive_id);
  const std::string symbol = anchor.primary_cpc().full_symbol();
  const auto it = ranges_.find(symbol);
  const Range excluded = it == ranges_.end() ? Range{} : it->second;
  const std::uint64_t candidates = by_symbol_.size() - excluded.size;
  if (candidates == 0) throw UnsatisfiableNegative(pair.anchor_id);

  CounterRng rng(seed_, pair_index);
  std::size_t pick = static_cast<std::size_t>(rng.uniform(candidates));
  if (pick >= excluded.begin) pick += excluded.size;
  const PatentRecord& negative = *by_symbol_[pick];
  return Triplet{anchor.patent_id, positive.patent_id, negative.patent_id,
                 anchor.abstract,  positive.abstract,  negative.abstract};
}

std::vector<Triplet> attach_negatives(std::span<const PatentPair> pairs, const PatentCorpus& corpus,
                                      std::uint64_t seed, unsigned workers) {
  const NegativeSampler sampler(corpus, seed);
  std::vector<Triplet> out(pairs.size());
  // Worker w handles indices w, w+W, ... in increasing order, so its first failure is its smallest.
  const unsigned slots = std::max(1u, workers);
  std::vector<std::pair<std::size_t, std::exception_ptr>> errors(slots);
  detail::parallel_for(pairs.size(), workers, [&](std::size_t i) {
    try {
      out[i] = sampler.attach(pairs[i], i);
    } catch (...) {
      auto& slot = errors[i % slots];
      if (!slot.second) slot = {i, std::current_exception()};
    }
  });
  const std::pair<std::size_t, std::exception_ptr>* first = nullptr;
  for (const auto& e : errors)
    if (e.second && (first == nullptr || e.first < first->first)) first = &e;
  if (first != nullptr) std::rethrow_exception(first->second);
  return out;
}

TripletSplit sample_and_split(std::span<const Triplet> triplets, double sample_fraction, SplitFractions fractions,
                              std::uint64_t seed) {
  auto in_unit = [](double f) { return std::isfinite(f) && f > 0.0 && f <= 1.0; };
  if (!in_unit(sample_fraction)) throw ParameterError("sample fraction must lie in (0, 1]");
  if (!in_unit(fractions.train) || !in_unit(fractions.validation))
    throw ParameterError("split fractions must lie in (0, 1]");
  if (std::abs(fractions.train + fractions.validation - 1.0) > 1e-9)
    throw ParameterError("split fractions must sum to 1");

  const std::uint64_t n = triplets.size();
  const auto k = static_cast<std::uint64_t>(std::floor(sample_fraction * static_cast<double>(n) + 1e-9));
  std::vector<std::uint64_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  CounterRng sample_rng(derive_seed(seed, "triplets.sample"));
  partial_shuffle(std::span(order), k, sample_rng);
  order.resize(k);

  // The sample order is already uniformly random, so the split is a prefix cut.
  const auto train_count = static_cast<std::uint64_t>(std::llround(fractions.train * static_cast<double>(k)));
  TripletSplit split;
  split.seed = seed;
  split.sample_fraction = sample_fraction;
  split.fractions = fractions;
  split.input_count = n;
  split.train_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(train_count));
  split.validation_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(train_count), order.end());
  std::sort(split.train_indices.begin(), split.train_indices.end());
  std::sort(split.validation_indices.begin(), split.validation_indices.end());
  for (auto i : split.train_indices) split.train.push_back(triplets[i]);
  for (auto i : split.validation_indices) split.validation.push_back(triplets[i]);
  return split;
}

void validate_triplet(const Triplet& t, const PatentCorpus& corpus) {
  const auto& a = corpus.at(t.anchor_id);
  const auto& p = corpus.at(t.positive_id);
  const auto& n = corpus.at(t.negative_id);
  if (t.anchor_id == t.positive_id || t.anchor_id == t.negative_id || t.positive_id == t.negative_id)
    throw ConsistencyError("triplet ids not pairwise distinct: " + t.anchor_id);
  if (a.primary_cpc().full_symbol() != p.primary_cpc().full_symbol() || a.filing_year != p.filing_year)
    throw ConsistencyError("anchor and positive do not share a group: " + t.anchor_id + "/" + t.positive_id);
  if (a.primary_cpc().full_symbol() == n.primary_cpc().full_symbol())
    throw ConsistencyError("negative shares the anchor's CPC symbol: " + t.negative_id);
  if (t.anchor_text == t.positive_text) throw ConsistencyError("anchor and positive abstracts are equal");
  if (t.anchor_text != a.abstract || t.positive_text != p.abstract || t.negative_text != n.abstract)
    throw ConsistencyError("triplet text does not match corpus abstract");
}

void write_triplets(std::ostream& out, std::span<const Triplet> triplets, std::uint64_t seed) {
  out << "PATSIM-TRIPLETS v1\tcount=" << triplets.size() << "\tseed=" << seed << '\n';
  for (const auto& t : triplets)
    out << t.anchor_id << '\t' << t.positive_id << '\t' << t.negative_id << '\t' << t.anchor_text << '\t'
        << t.positive_text << '\t' << t.negative_text << '\n';
}

namespace {

std::uint64_t parse_u64(std::string_view s, std::uint64_t line) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw FormatError("expected integer, got '" + std::string(s) + "'", line);
  return v;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t pos; (pos = line.find('\t', start)) != std::string_view::npos; start = pos + 1)
    out.push_back(line.substr(start, pos - start));
  out.push_back(line.substr(start));
  return out;
}

}  // namespace

std::vector<Triplet> read_triplets(LineSource& source, std::uint64_t* seed) {
  std::string line;
  if (!source.next_line(line)) throw FormatError("empty triplet file", 1);
  const auto header = split_tabs(line);
  if (header.size() != 3 || header[0] != "PATSIM-TRIPLETS v1" || !header[1].starts_with("count=") ||
      !header[2].starts_with("seed="))
    throw FormatError("not a PATSIM-TRIPLETS v1 file", 1);
  const std::uint64_t count = parse_u64(header[1].substr(6), 1);
  if (seed != nullptr) *seed = parse_u64(header[2].substr(5), 1);

  std::vector<Triplet> out;
  std::uint64_t line_no = 1;
  while (source.next_line(line)) {
    ++line_no;
    const auto f = split_tabs(line);
    if (f.size() != 6) throw FormatError("triplet line must have 6 fields", line_no);
    out.push_back(Triplet{std::string(f[0]), std::string(f[1]), std::string(f[2]), std::string(f[3]),
                          std::string(f[4]), std::string(f[5])});
  }
  if (out.size() != count) throw FormatError("triplet count does not match header", 0);
  return out;
}

void write_split_manifest(const std::filesystem::path& prefix, const TripletSplit& split) {
  auto write_indices = [](const std::filesystem::path& path, const std::vector<std::uint64_t>& idx) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    for (auto i : idx) out << i << '\n';
  };
  const std::string base = prefix.string();
  write_indices(base + ".train.idx", split.train_indices);
  write_indices(base + ".validation.idx", split.validation_indices);

  nlohmann::ordered_json meta;
  meta["format"] = "PATSIM-SPLIT v1";
  meta["seed"] = split.seed;
  meta["sample_fraction"] = split.sample_fraction;
  meta["train_fraction"] = split.fractions.train;
  meta["validation_fraction"] = split.fractions.validation;
  meta["input_count"] = split.input_count;
  meta["sampled_count"] = split.train_indices.size() + split.validation_indices.size();
  meta["train_count"] = split.train_indices.size();
  meta["validation_count"] = split.validation_indices.size();
  std::ofstream out(base + ".meta.json", std::ios::binary);
  if (!out) throw IoError("cannot write '" + base + ".meta.json'");
  out << meta.dump(2) << '\n';
}

}  // namespace patsim
