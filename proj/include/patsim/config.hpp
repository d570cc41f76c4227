#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "patsim/corpus.hpp"
#include "patsim/table.hpp"

namespace patsim {

enum class ValueKind { String, Path, Unsigned, Real, Boolean, OptionalSeed, Delimiter, IdfName, Format };

struct ConfigKey {
  std::string_view name;
  ValueKind kind;
  std::string_view default_value;
  std::string_view help;
};

/// Every accepted key, in file order.
std::span<const ConfigKey> config_keys();

/// Stages whose seed fans out from the master seed.
std::span<const std::string_view> seeded_stages();

/// Flat "key = value" settings. Lines starting with '#' and blank lines are ignored;
/// unknown keys are rejected.
class RunConfig {
 public:
  RunConfig();  // all defaults

  static RunConfig parse(std::istream& in, std::string_view name = "<config>");
  static RunConfig load(const std::filesystem::path& path);
  /// Every key with its current value, one per line, in key-table order.
  void write(std::ostream& out) const;

  void set(std::string_view key, std::string value);
  const std::string& get(std::string_view key) const;
  std::uint64_t get_unsigned(std::string_view key) const;
  double get_real(std::string_view key) const;
  bool get_bool(std::string_view key) const;
  char get_delimiter(std::string_view key) const;
  /// Comma-separated list, empty entries dropped.
  std::vector<std::string> get_list(std::string_view key) const;

  /// Type-checks every value. Throws ConfigError naming the key.
  void validate() const;

  /// Explicit seed.<stage> when set, else derive_seed(seed, stage).
  std::uint64_t stage_seed(std::string_view stage) const;
  bool stage_seed_explicit(std::string_view stage) const;

  /// Worker count for training stages; 1 in deterministic mode.
  unsigned training_workers() const;
  /// Worker count for stages whose output does not depend on scheduling.
  unsigned workers() const;

  ColumnMap columns(std::string_view table) const;  // cpc, application, patent, claims, cases
  IngestColumns ingest_columns() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

 private:
  std::map<std::string, std::string, std::less<>> values_;
};

}  // namespace patsim
