#include "patsim/table.hpp"

#include <zlib.h>

#include <algorithm>

#include "patsim/errors.hpp"

namespace patsim {

namespace {

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

class GzLineSource final : public LineSource {
 public:
  explicit GzLineSource(const std::filesystem::path& path) : name_(path.string()) {
    file_ = gzopen(name_.c_str(), "rb");
    if (file_ == nullptr) throw IoError("cannot open '" + name_ + "'");
    gzbuffer(file_, 1 << 17);
  }
  ~GzLineSource() override {
    if (file_ != nullptr) gzclose(file_);
  }
  GzLineSource(const GzLineSource&) = delete;
  GzLineSource& operator=(const GzLineSource&) = delete;

  bool next_line(std::string& line) override {
    line.clear();
    char chunk[8192];
    bool got_any = false;
    while (gzgets(file_, chunk, sizeof chunk) != nullptr) {
      got_any = true;
      std::size_t len = std::char_traits<char>::length(chunk);
      if (len > 0 && chunk[len - 1] == '\n') {
        line.append(chunk, len - 1);
        strip_cr(line);
        return true;
      }
      line.append(chunk, len);
    }
    int err = 0;
    const char* msg = gzerror(file_, &err);
    if (err != Z_OK && err != Z_STREAM_END) throw IoError("read error in '" + name_ + "': " + msg);
    strip_cr(line);
    return got_any;
  }

  const std::string& name() const override { return name_; }

 private:
  std::string name_;
  gzFile file_ = nullptr;
};

class StreamLineSource final : public LineSource {
 public:
  StreamLineSource(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

  bool next_line(std::string& line) override {
    if (!std::getline(in_, line)) {
      if (in_.bad()) throw IoError("read error in '" + name_ + "'");
      return false;
    }
    strip_cr(line);
    return true;
  }

  const std::string& name() const override { return name_; }

 private:
  std::istream& in_;
  std::string name_;
};

void split(std::string_view line, char delimiter, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

std::unique_ptr<LineSource> open_lines(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("input file not found: '" + path.string() + "'");
  return std::make_unique<GzLineSource>(path);
}

std::unique_ptr<LineSource> stream_lines(std::istream& in, std::string name) {
  return std::make_unique<StreamLineSource>(in, std::move(name));
}

void ColumnMap::set(std::string_view role, std::string column) {
  for (auto& [r, c] : roles_) {
    if (r == role) {
      c = std::move(column);
      return;
    }
  }
  roles_.emplace_back(std::string(role), std::move(column));
}

const std::string& ColumnMap::column(std::string_view role) const {
  for (const auto& [r, c] : roles_)
    if (r == role) return c;
  throw SchemaError("ColumnMap has no role '" + std::string(role) + "'");
}

bool ColumnMap::has_role(std::string_view role) const {
  return std::any_of(roles_.begin(), roles_.end(), [&](const auto& rc) { return rc.first == role; });
}

TableReader::TableReader(std::unique_ptr<LineSource> source, ColumnMap columns, char delimiter)
    : source_(std::move(source)), columns_(std::move(columns)), delimiter_(delimiter) {
  std::string header;
  if (!source_->next_line(header)) throw SchemaError("'" + source_->name() + "' has no header row");
  std::vector<std::string_view> names;
  split(header, delimiter_, names);
  header_width_ = names.size();
  for (const auto& [role, column] : columns_.roles()) {
    if (column.empty()) {
      positions_.push_back(std::string_view::npos);
      continue;
    }
    const auto it = std::find(names.begin(), names.end(), column);
    if (it == names.end())
      throw SchemaError("'" + source_->name() + "': missing required column '" + column +
                        "' (role " + role + ")");
    positions_.push_back(static_cast<std::size_t>(it - names.begin()));
  }
}

std::optional<Row> TableReader::next() {
  while (source_->next_line(line_)) {
    ++line_no_;
    ++counters_.read;
    split(line_, delimiter_, fields_);
    if (fields_.size() != header_width_) {
      ++counters_.malformed;
      continue;
    }
    Row row;
    row.line = line_no_;
    row.values.reserve(positions_.size());
    for (std::size_t pos : positions_)
      row.values.emplace_back(pos == std::string_view::npos ? std::string_view{} : fields_[pos]);
    ++counters_.yielded;
    return row;
  }
  return std::nullopt;
}

void TableReader::reject() {
  if (counters_.yielded == 0) throw ContractError("TableReader::reject without a yielded row");
  --counters_.yielded;
  ++counters_.malformed;
}

std::size_t TableReader::role_index(std::string_view role) const {
  const auto& roles = columns_.roles();
  for (std::size_t i = 0; i < roles.size(); ++i)
    if (roles[i].first == role) return i;
  throw SchemaError("unknown role '" + std::string(role) + "'");
}

}  // namespace patsim
