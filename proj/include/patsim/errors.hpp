#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace patsim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A table header lacks a column the ColumnMap requires.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A file in one of the PATSIM-* formats (or a checkpoint) violates its layout.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::uint64_t line)
      : Error(line == 0 ? what : what + " (line " + std::to_string(line) + ")"), line_(line) {}

  std::uint64_t line() const noexcept { return line_; }

 private:
  std::uint64_t line_;
};

class IngestConflict : public Error {
 public:
  explicit IngestConflict(std::string id, const std::string& detail)
      : Error("ingestion conflict for id '" + id + "': " + detail), id_(std::move(id)) {}

  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class ContractError : public Error {
 public:
  using Error::Error;
};

class UndefinedSimilarity : public Error {
 public:
  using Error::Error;
};

/// An embedder cannot produce a vector for the input (all tokens unknown, unknown id, ...).
class UndefinedEmbedding : public Error {
 public:
  using Error::Error;
};

class UnsatisfiableNegative : public Error {
 public:
  explicit UnsatisfiableNegative(const std::string& anchor_id)
      : Error("no negative candidate outside the CPC symbol of anchor '" + anchor_id + "'") {}
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

class SelectionError : public Error {
 public:
  using Error::Error;
};

class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace patsim
