#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "patsim/table.hpp"
#include "patsim/vector.hpp"

namespace patsim {

/// Vectors produced outside this library (e.g. by a fine-tuned sentence encoder),
/// keyed by document id. All vectors share one dimensionality.
class ExternalVectors {
 public:
  ExternalVectors(std::string source, std::size_t dim);

  void add(std::string id, DenseVector vector);

  /// Throws UndefinedEmbedding for an unknown id.
  const DenseVector& at(std::string_view id) const;
  bool contains(std::string_view id) const;

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  const std::string& source() const { return source_; }
  /// Ids in insertion (file) order.
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  std::string source_;
  std::size_t dim_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, DenseVector> vectors_;
};

/// PATSIM-VECS v1: header "PATSIM-VECS v1 dim=<d> count=<n> source=<label>", then
/// "id<TAB>v1<TAB>...<TAB>vd" per line. Floats are written in shortest round-trip form.
void write_external_vectors(std::ostream& out, const ExternalVectors& vectors);
ExternalVectors read_external_vectors(LineSource& source);
ExternalVectors load_external_vectors(const std::filesystem::path& path);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

}  // namespace patsim
