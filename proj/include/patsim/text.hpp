#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace patsim {

/// Ingest normalization: Unicode NFC, whitespace runs collapsed to one ASCII
/// space, leading/trailing whitespace removed. Case is preserved.
/// Invalid UTF-8 sequences are replaced by U+FFFD.
std::string normalize_text(std::string_view text);

struct TokenizerConfig {
  /// Minimum token length in code points.
  std::size_t min_length = 2;
};

/// Lowercases, splits on every non-alphanumeric code point and keeps tokens
/// of at least `min_length` code points (digit-only tokens included).
std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config = {});

/// ASCII-only lowercase copy.
std::string ascii_lower(std::string_view text);

/// Prefix of `text` holding at most `max_code_points` UTF-8 code points.
std::string_view utf8_prefix(std::string_view text, std::size_t max_code_points);

}  // namespace patsim
