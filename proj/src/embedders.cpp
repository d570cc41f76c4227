#include "patsim/embedders.hpp"

#include "patsim/errors.hpp"
#include "patsim/rng.hpp"
#include "patsim/text.hpp"

namespace patsim {

DenseVector DbowEmbedder::embed(const Document& doc) const {
  if (prefer_trained_ && !doc.id.empty() && model_->doc_index(doc.id)) return model_->trained_vector(doc.id);
  return infer_dbow(*model_, doc.text, inference_);
}

HashingEmbedder::HashingEmbedder(std::size_t dim, std::uint64_t salt, std::string name)
    : dim_(dim), salt_(salt), name_(std::move(name)) {
  if (dim_ == 0) throw ParameterError("hashing embedder dim must be positive");
}

DenseVector HashingEmbedder::embed(const Document& doc) const {
  std::vector<double> v(dim_, 0.0);
  bool any = false;
  for (const auto& token : tokenize(doc.text)) {
    const std::uint64_t h = mix64(fnv1a64(token) ^ salt_);
    v[h % dim_] += (h >> 63) != 0 ? -1.0 : 1.0;
    any = true;
  }
  if (!any) throw UndefinedEmbedding("hashing embedder: document has no tokens");
  bool nonzero = false;
  for (double x : v) nonzero = nonzero || x != 0.0;
  if (!nonzero) throw UndefinedEmbedding("hashing embedder: token hashes cancel to a zero vector");
  return DenseVector(std::move(v));
}

}  // namespace patsim
