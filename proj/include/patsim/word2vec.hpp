#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patsim/vector.hpp"
#include "patsim/vocabulary.hpp"

namespace patsim {

/// Skip-gram negative-sampling hyperparameters (canonical word2vec defaults).
struct SgnsConfig {
  std::size_t dim = 300;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  float lr_start = 0.025f;
  float lr_end = 0.0001f;
  std::uint64_t min_count = 5;
  double unigram_power = 0.75;
  std::uint64_t seed = 1;
  /// 1 = deterministic; more workers share the matrices lock-free.
  unsigned workers = 1;
};

struct TrainingLog {
  std::vector<double> epoch_mean_loss;
  std::uint64_t samples = 0;
  std::uint64_t skipped_documents = 0;
};

/// Input (word) and output (context) matrices, row-major |V| x dim.
struct WordVectors {
  Vocabulary vocab;
  std::size_t dim = 0;
  std::vector<float> input;
  std::vector<float> output;

  std::span<const float> vector(std::uint32_t index) const { return {input.data() + index * dim, dim}; }
};

/// Seeded initialization used by train_word2vec: input rows uniform in
/// [-0.5, 0.5)/dim, output rows zero.
WordVectors init_word_vectors(Vocabulary vocab, std::size_t dim, std::uint64_t seed);

/// Trains SGNS word vectors; throws TrainingError on an empty vocabulary.
WordVectors train_word2vec(std::span<const std::vector<std::string>> documents, const SgnsConfig& config,
                           TrainingLog* log = nullptr);

enum class IdfVariant { Smoothed, RawLog };

/// Smoothed: ln((1 + N) / (1 + df)) + 1.  RawLog: ln(N / df), 0 when df == 0.
double idf_value(std::uint64_t document_count, std::uint64_t document_frequency,
                 IdfVariant variant = IdfVariant::Smoothed);

/// idf for every vocabulary entry, indexed like the vocabulary.
std::vector<double> compute_idf(const Vocabulary& vocab, IdfVariant variant = IdfVariant::Smoothed);

/// Word vectors pooled by TF-IDF weights into a document vector.
class W2vTfidfModel {
 public:
  W2vTfidfModel(WordVectors vectors, IdfVariant variant = IdfVariant::Smoothed);
  W2vTfidfModel(WordVectors vectors, std::vector<double> idf, IdfVariant variant);

  const WordVectors& vectors() const { return vectors_; }
  const std::vector<double>& idf() const { return idf_; }
  IdfVariant idf_variant() const { return variant_; }
  std::size_t dim() const { return vectors_.dim; }

 private:
  WordVectors vectors_;
  std::vector<double> idf_;
  IdfVariant variant_;
};

W2vTfidfModel train_w2v_tfidf(std::span<const std::string> texts, const SgnsConfig& config,
                              IdfVariant variant = IdfVariant::Smoothed, TrainingLog* log = nullptr);

/// sum_t tf(t,d) idf(t) w(t) / sum_t tf(t,d) idf(t) over in-vocabulary tokens.
/// Throws UndefinedEmbedding when no token is in the vocabulary.
DenseVector embed_w2v_tfidf(const W2vTfidfModel& model, std::string_view text);

}  // namespace patsim
