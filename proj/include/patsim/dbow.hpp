#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "patsim/vector.hpp"
#include "patsim/vocabulary.hpp"
#include "patsim/word2vec.hpp"

namespace patsim {

struct DbowConfig {
  std::size_t dim = 300;
  std::size_t epochs = 10;
  std::size_t negatives = 5;
  float lr_start = 0.025f;
  float lr_end = 0.0001f;
  std::uint64_t min_count = 5;
  double unigram_power = 0.75;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

/// Paragraph vectors (distributed bag of words) with negative sampling.
class DbowModel {
 public:
  DbowModel() = default;
  DbowModel(Vocabulary vocab, std::size_t dim, std::vector<std::string> doc_ids, std::vector<float> doc_vectors,
            std::vector<float> output);

  const Vocabulary& vocab() const { return vocab_; }
  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& doc_ids() const { return doc_ids_; }
  const std::vector<float>& doc_matrix() const { return doc_vectors_; }
  const std::vector<float>& output_matrix() const { return output_; }

  std::optional<std::size_t> doc_index(std::string_view id) const;
  std::span<const float> doc_vector(std::size_t index) const { return {doc_vectors_.data() + index * dim_, dim_}; }
  std::span<const float> output_row(std::uint32_t word) const { return {output_.data() + word * dim_, dim_}; }
  DenseVector trained_vector(std::string_view id) const;

  // Training access.
  std::vector<float>& mutable_doc_matrix() { return doc_vectors_; }
  std::vector<float>& mutable_output_matrix() { return output_; }

 private:
  Vocabulary vocab_;
  std::size_t dim_ = 0;
  std::vector<std::string> doc_ids_;
  std::unordered_map<std::string, std::size_t> doc_index_;
  std::vector<float> doc_vectors_;
  std::vector<float> output_;
};

/// Trains PV-DBOW on tokenized documents. Documents with no in-vocabulary token are
/// skipped (log->skipped_documents) and get no vector. Duplicate ids are an error.
DbowModel train_dbow(std::span<const Document> documents, const DbowConfig& config, TrainingLog* log = nullptr);

/// Row-major starting doc matrix of train_dbow for `documents` kept documents.
std::vector<float> dbow_initial_doc_matrix(std::size_t documents, std::size_t dim, std::uint64_t seed);

/// Initial vector for inference of `text` under `seed`.
std::vector<float> dbow_initial_vector(std::size_t dim, std::string_view text, std::uint64_t seed);

struct DbowInference {
  std::size_t epochs = 10;
  std::size_t negatives = 5;
  float lr_start = 0.025f;
  float lr_end = 0.0001f;
  double unigram_power = 0.75;
  std::uint64_t seed = 1;
};

/// Fits a fresh document vector for unseen text with the word matrices frozen.
/// Throws UndefinedEmbedding when every token is out of vocabulary.
DenseVector infer_dbow(const DbowModel& model, std::string_view text, const DbowInference& params);

inline DenseVector infer_dbow(const DbowModel& model, std::string_view text, std::size_t epochs,
                              std::uint64_t seed) {
  DbowInference params;
  params.epochs = epochs;
  params.seed = seed;
  return infer_dbow(model, text, params);
}

}  // namespace patsim
