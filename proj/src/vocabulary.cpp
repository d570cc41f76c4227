#include "patsim/vocabulary.hpp"

#include <algorithm>
#include <limits>
#include <unordered_set>

#include "patsim/errors.hpp"

namespace patsim {

Vocabulary Vocabulary::build(std::span<const std::vector<std::string>> documents, std::uint64_t min_count) {
  std::unordered_map<std::string, VocabEntry> counts;
  for (const auto& doc : documents) {
    std::unordered_set<std::string_view> seen;
    for (const auto& token : doc) {
      auto& e = counts[token];
      ++e.corpus_frequency;
      if (seen.insert(token).second) ++e.document_frequency;
    }
  }
  std::vector<VocabEntry> entries;
  entries.reserve(counts.size());
  for (auto& [token, e] : counts) {
    if (e.corpus_frequency < min_count) continue;
    e.token = token;
    entries.push_back(std::move(e));
  }
  std::sort(entries.begin(), entries.end(), [](const VocabEntry& a, const VocabEntry& b) {
    return a.corpus_frequency != b.corpus_frequency ? a.corpus_frequency > b.corpus_frequency : a.token < b.token;
  });
  return from_entries(std::move(entries), min_count, documents.size());
}

Vocabulary Vocabulary::from_entries(std::vector<VocabEntry> entries, std::uint64_t min_count,
                                    std::uint64_t document_count) {
  if (entries.size() > std::numeric_limits<std::uint32_t>::max()) throw ContractError("vocabulary too large");
  Vocabulary v;
  v.min_count_ = min_count;
  v.document_count_ = document_count;
  v.entries_ = std::move(entries);
  v.index_.reserve(v.entries_.size());
  for (std::uint32_t i = 0; i < v.entries_.size(); ++i) {
    const auto& e = v.entries_[i];
    if (e.corpus_frequency < min_count) throw ContractError("vocabulary entry below min_count: " + e.token);
    if (!v.index_.emplace(e.token, i).second) throw ContractError("duplicate vocabulary token: " + e.token);
  }
  return v;
}

std::optional<std::uint32_t> Vocabulary::find(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::uint32_t> Vocabulary::encode(std::span<const std::string> tokens) const {
  std::vector<std::uint32_t> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens)
    if (const auto i = find(t)) out.push_back(*i);
  return out;
}

}  // namespace patsim
