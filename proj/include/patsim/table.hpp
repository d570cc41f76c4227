#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace patsim {

/// Line-at-a-time byte source. Implementations never hold more than one line.
class LineSource {
 public:
  virtual ~LineSource() = default;

  /// Reads the next line without its terminator ("\n" or "\r\n").
  virtual bool next_line(std::string& line) = 0;

  virtual const std::string& name() const = 0;
};

/// Opens a plain or gzip-compressed file. Throws IoError if it cannot be opened.
std::unique_ptr<LineSource> open_lines(const std::filesystem::path& path);

/// Wraps a caller-owned stream; the stream must outlive the source.
std::unique_ptr<LineSource> stream_lines(std::istream& in, std::string name = "<stream>");

/// Maps logical roles ("patent_id", "filing_date", ...) to header column names.
/// A role mapped to an empty column name is optional and reads as "".
class ColumnMap {
 public:
  ColumnMap() = default;
  ColumnMap(std::initializer_list<std::pair<std::string, std::string>> roles) : roles_(roles) {}

  void set(std::string_view role, std::string column);
  const std::string& column(std::string_view role) const;
  bool has_role(std::string_view role) const;

  const std::vector<std::pair<std::string, std::string>>& roles() const { return roles_; }

 private:
  std::vector<std::pair<std::string, std::string>> roles_;
};

struct TableCounters {
  std::uint64_t read = 0;
  std::uint64_t yielded = 0;
  std::uint64_t malformed = 0;
};

/// One data row, values in ColumnMap role order.
struct Row {
  std::uint64_t line = 0;
  std::vector<std::string> values;

  const std::string& operator[](std::size_t role_index) const { return values[role_index]; }
};

/// Streaming delimited-table reader. Rows whose field count differs from the
/// header are counted as malformed and skipped. Invariant: read == yielded + malformed.
class TableReader {
 public:
  TableReader(std::unique_ptr<LineSource> source, ColumnMap columns, char delimiter = '\t');

  std::optional<Row> next();

  /// Reclassifies the most recently yielded row as malformed (typed-field failure).
  void reject();

  std::size_t role_index(std::string_view role) const;
  const TableCounters& counters() const { return counters_; }
  const std::string& source_name() const { return source_->name(); }
  std::size_t line_capacity() const { return line_.capacity(); }

 private:
  std::unique_ptr<LineSource> source_;
  ColumnMap columns_;
  char delimiter_;
  std::vector<std::size_t> positions_;  // header position of each role, npos if optional+absent
  std::size_t header_width_ = 0;
  std::uint64_t line_no_ = 1;
  std::string line_;
  std::vector<std::string_view> fields_;
  TableCounters counters_;
};

/// Row reader that converts each raw row to T; a failed conversion counts as malformed.
template <class T>
class TypedTableReader {
 public:
  using Parser = std::function<std::optional<T>(const Row&, const TableReader&)>;

  TypedTableReader(TableReader table, Parser parser)
      : table_(std::move(table)), parser_(std::move(parser)) {}

  std::optional<T> next() {
    while (auto row = table_.next()) {
      if (auto value = parser_(*row, table_)) return value;
      table_.reject();
    }
    return std::nullopt;
  }

  std::vector<T> collect() {
    std::vector<T> out;
    while (auto v = next()) out.push_back(std::move(*v));
    return out;
  }

  const TableCounters& counters() const { return table_.counters(); }
  const TableReader& table() const { return table_; }

 private:
  TableReader table_;
  Parser parser_;
};

}  // namespace patsim
