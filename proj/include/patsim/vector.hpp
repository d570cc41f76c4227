#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace patsim {

/// Finite, non-empty real vector.
class DenseVector {
 public:
  explicit DenseVector(std::vector<double> values);

  std::size_t dim() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const DenseVector&, const DenseVector&) = default;

 private:
  std::vector<double> values_;
};

/// dot(a, b) / (|a| |b|), clamped to [-1, 1].
/// Throws ContractError on dimension mismatch and UndefinedSimilarity on a zero vector.
double cosine(const DenseVector& a, const DenseVector& b);

/// Text with a stable identifier. Text-based embedders read `text`;
/// precomputed-vector embedders look up `id`.
struct Document {
  std::string id;
  std::string text;
};

/// Uniform text -> vector interface. Implementations are immutable and must return
/// identical vectors for identical input. Failure to embed throws UndefinedEmbedding.
class Embedder {
 public:
  virtual ~Embedder() = default;

  virtual std::string_view name() const = 0;
  virtual std::size_t dim() const = 0;
  virtual DenseVector embed(const Document& doc) const = 0;
};

}  // namespace patsim
