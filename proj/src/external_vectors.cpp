#include "patsim/external_vectors.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "patsim/errors.hpp"

namespace patsim {

ExternalVectors::ExternalVectors(std::string source, std::size_t dim) : source_(std::move(source)), dim_(dim) {
  if (dim_ == 0) throw ContractError("external vectors need a positive dimension");
  if (source_.empty()) source_ = "unknown";
}

void ExternalVectors::add(std::string id, DenseVector vector) {
  if (vector.dim() != dim_)
    throw ContractError("vector for '" + id + "' has dim " + std::to_string(vector.dim()) + ", expected " +
                        std::to_string(dim_));
  if (vectors_.contains(id)) throw ContractError("duplicate vector id '" + id + "'");
  vectors_.emplace(id, std::move(vector));
  ids_.push_back(std::move(id));
}

const DenseVector& ExternalVectors::at(std::string_view id) const {
  const auto it = vectors_.find(std::string(id));
  if (it == vectors_.end()) throw UndefinedEmbedding("no external vector for id '" + std::string(id) + "' in " + source_);
  return it->second;
}

bool ExternalVectors::contains(std::string_view id) const { return vectors_.contains(std::string(id)); }

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw ContractError("cannot format double");
  return std::string(buf, ptr);
}

void write_external_vectors(std::ostream& out, const ExternalVectors& vectors) {
  out << "PATSIM-VECS v1 dim=" << vectors.dim() << " count=" << vectors.size() << " source=" << vectors.source()
      << '\n';
  for (const auto& id : vectors.ids()) {
    out << id;
    for (double v : vectors.at(id).values()) out << '\t' << format_double(v);
    out << '\n';
  }
}

namespace {

std::size_t parse_size(std::string_view s, std::uint64_t line) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw FormatError("PATSIM-VECS: bad integer '" + std::string(s) + "'", line);
  return v;
}

}  // namespace

ExternalVectors read_external_vectors(LineSource& source) {
  std::string line;
  if (!source.next_line(line)) throw FormatError("PATSIM-VECS: empty file '" + source.name() + "'", 1);
  std::string_view header = line;
  constexpr std::string_view magic = "PATSIM-VECS v1";
  if (!header.starts_with(magic) || (header.size() > magic.size() && header[magic.size()] != ' ')) throw FormatError("PATSIM-VECS: missing 'PATSIM-VECS v1' header", 1);
  header.remove_prefix(magic.size());

  std::size_t dim = 0, count = 0;
  bool has_dim = false, has_count = false;
  std::string label = "unknown";
  while (!header.empty()) {
    while (!header.empty() && header.front() == ' ') header.remove_prefix(1);
    const auto end = header.find(' ');
    const std::string_view field = header.substr(0, end);
    header = end == std::string_view::npos ? std::string_view{} : header.substr(end);
    if (field.empty()) continue;
    if (field.starts_with("dim=")) {
      dim = parse_size(field.substr(4), 1);
      has_dim = true;
    } else if (field.starts_with("count=")) {
      count = parse_size(field.substr(6), 1);
      has_count = true;
    } else if (field.starts_with("source=")) {
      label = std::string(field.substr(7));
    } else {
      throw FormatError("PATSIM-VECS: unknown header field '" + std::string(field) + "'", 1);
    }
  }
  if (!has_dim || !has_count || dim == 0) throw FormatError("PATSIM-VECS: header needs dim>0 and count", 1);

  ExternalVectors vectors(label, dim);
  std::uint64_t line_no = 1;
  std::vector<double> values;
  while (source.next_line(line)) {
    ++line_no;
    std::string_view rest = line;
    const auto tab = rest.find('\t');
    if (tab == std::string_view::npos || tab == 0) throw FormatError("PATSIM-VECS: line needs an id and values", line_no);
    std::string id(rest.substr(0, tab));
    rest.remove_prefix(tab + 1);
    values.clear();
    while (true) {
      const auto next = rest.find('\t');
      const std::string_view field = rest.substr(0, next);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v))
        throw FormatError("PATSIM-VECS: bad value '" + std::string(field) + "'", line_no);
      values.push_back(v);
      if (next == std::string_view::npos) break;
      rest.remove_prefix(next + 1);
    }
    if (values.size() != dim)
      throw FormatError("PATSIM-VECS: expected " + std::to_string(dim) + " values, got " +
                            std::to_string(values.size()),
                        line_no);
    if (vectors.contains(id)) throw FormatError("PATSIM-VECS: duplicate id '" + id + "'", line_no);
    vectors.add(std::move(id), DenseVector(values));
  }
  if (vectors.size() != count)
    throw FormatError("PATSIM-VECS: header count=" + std::to_string(count) + " but " +
                          std::to_string(vectors.size()) + " vectors",
                      line_no);
  return vectors;
}

ExternalVectors load_external_vectors(const std::filesystem::path& path) {
  auto source = open_lines(path);
  return read_external_vectors(*source);
}

}  // namespace patsim
