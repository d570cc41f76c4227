#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace patsim {

struct VocabEntry {
  std::string token;
  std::uint64_t corpus_frequency = 0;
  std::uint64_t document_frequency = 0;

  friend bool operator==(const VocabEntry&, const VocabEntry&) = default;
};

/// Token table with dense indices ordered by descending corpus frequency, then token.
class Vocabulary {
 public:
  Vocabulary() = default;

  /// Tokens with corpus frequency below min_count are dropped.
  static Vocabulary build(std::span<const std::vector<std::string>> documents, std::uint64_t min_count);

  /// Reassembles a vocabulary from stored entries (checkpoint loading).
  static Vocabulary from_entries(std::vector<VocabEntry> entries, std::uint64_t min_count,
                                 std::uint64_t document_count);

  std::optional<std::uint32_t> find(std::string_view token) const;
  const VocabEntry& entry(std::uint32_t index) const { return entries_[index]; }
  const std::vector<VocabEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::uint64_t min_count() const { return min_count_; }
  /// Number of documents the frequencies were counted over.
  std::uint64_t document_count() const { return document_count_; }

  /// In-vocabulary token indices of a document, in order.
  std::vector<std::uint32_t> encode(std::span<const std::string> tokens) const;

 private:
  std::vector<VocabEntry> entries_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::uint64_t min_count_ = 1;
  std::uint64_t document_count_ = 0;
};

}  // namespace patsim
