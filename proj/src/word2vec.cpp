#include "patsim/word2vec.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "patsim/errors.hpp"
#include "patsim/rng.hpp"
#include "patsim/text.hpp"
#include "sgns_training.hpp"

namespace patsim {

WordVectors init_word_vectors(Vocabulary vocab, std::size_t dim, std::uint64_t seed) {
  WordVectors wv;
  wv.dim = dim;
  wv.input.resize(vocab.size() * dim);
  wv.output.assign(vocab.size() * dim, 0.0f);
  const std::uint64_t key = derive_seed(seed, "w2v.init");
  for (std::size_t i = 0; i < vocab.size(); ++i) detail::init_row(std::span(wv.input).subspan(i * dim, dim), key, i);
  wv.vocab = std::move(vocab);
  return wv;
}

WordVectors train_word2vec(std::span<const std::vector<std::string>> documents, const SgnsConfig& config,
                           TrainingLog* log) {
  if (config.dim == 0) throw ParameterError("word2vec dim must be positive");
  if (config.window == 0) throw ParameterError("word2vec window must be positive");
  Vocabulary vocab = Vocabulary::build(documents, config.min_count);
  if (vocab.empty()) throw TrainingError("word2vec: empty vocabulary (min_count=" + std::to_string(config.min_count) + ")");

  std::vector<std::vector<std::uint32_t>> encoded;
  encoded.reserve(documents.size());
  for (const auto& doc : documents) encoded.push_back(vocab.encode(doc));
  std::vector<std::uint64_t> offset(encoded.size() + 1, 0);
  for (std::size_t i = 0; i < encoded.size(); ++i) offset[i + 1] = offset[i] + encoded[i].size();
  const double total = static_cast<double>(offset.back()) * static_cast<double>(config.epochs);

  WordVectors wv = init_word_vectors(std::move(vocab), config.dim, config.seed);
  const detail::UnigramSampler sampler(wv.vocab, config.unigram_power);
  const std::uint64_t train_key = derive_seed(config.seed, "w2v.train");
  const std::size_t d = config.dim;
  const unsigned workers = std::max(1u, config.workers);

  TrainingLog local;
  for (const auto& doc : encoded)
    if (doc.size() < 2) ++local.skipped_documents;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<double> loss(workers, 0.0);
    std::vector<std::uint64_t> samples(workers, 0);
    auto run = [&](unsigned w) {
      detail::SgnsScratch scratch(d);
      std::vector<float*> rows;
      for (std::size_t doc = w; doc < encoded.size(); doc += workers) {
        const auto& words = encoded[doc];
        CounterRng rng(train_key, epoch * encoded.size() + doc);
        for (std::size_t pos = 0; pos < words.size(); ++pos) {
          const double progress =
              (static_cast<double>(epoch * offset.back() + offset[doc] + pos)) / std::max(total, 1.0);
          const float lr = detail::linear_lr(config.lr_start, config.lr_end, progress);
          const std::size_t reach = config.window - static_cast<std::size_t>(rng.uniform(config.window));
          const std::size_t lo = pos >= reach ? pos - reach : 0;
          const std::size_t hi = std::min(words.size() - 1, pos + reach);
          float* center = wv.input.data() + words[pos] * d;
          for (std::size_t c = lo; c <= hi; ++c) {
            if (c == pos) continue;
            const std::uint32_t target = words[c];
            rows.clear();
            rows.push_back(wv.output.data() + target * d);
            for (std::size_t k = 0; k < config.negatives; ++k) {
              const std::uint32_t neg = sampler.draw(rng);
              if (neg != target) rows.push_back(wv.output.data() + neg * d);
            }
            loss[w] += detail::sgns_step(center, rows, lr, scratch);
            ++samples[w];
          }
        }
      }
    };
    if (workers == 1) {
      run(0);
    } else {
      std::vector<std::jthread> threads;
      for (unsigned w = 0; w < workers; ++w) threads.emplace_back(run, w);
    }
    const double epoch_loss = std::accumulate(loss.begin(), loss.end(), 0.0);
    const std::uint64_t epoch_samples = std::accumulate(samples.begin(), samples.end(), std::uint64_t{0});
    local.samples += epoch_samples;
    local.epoch_mean_loss.push_back(epoch_samples == 0 ? 0.0 : epoch_loss / static_cast<double>(epoch_samples));
  }
  if (log != nullptr) *log = std::move(local);
  return wv;
}

double idf_value(std::uint64_t document_count, std::uint64_t document_frequency, IdfVariant variant) {
  const auto n = static_cast<double>(document_count);
  const auto df = static_cast<double>(document_frequency);
  switch (variant) {
    case IdfVariant::Smoothed:
      return std::log((1.0 + n) / (1.0 + df)) + 1.0;
    case IdfVariant::RawLog:
      return document_frequency == 0 ? 0.0 : std::log(n / df);
  }
  throw ContractError("unknown idf variant");
}

std::vector<double> compute_idf(const Vocabulary& vocab, IdfVariant variant) {
  std::vector<double> idf;
  idf.reserve(vocab.size());
  for (const auto& e : vocab.entries()) idf.push_back(idf_value(vocab.document_count(), e.document_frequency, variant));
  return idf;
}

W2vTfidfModel::W2vTfidfModel(WordVectors vectors, IdfVariant variant)
    : vectors_(std::move(vectors)), idf_(compute_idf(vectors_.vocab, variant)), variant_(variant) {}

W2vTfidfModel::W2vTfidfModel(WordVectors vectors, std::vector<double> idf, IdfVariant variant)
    : vectors_(std::move(vectors)), idf_(std::move(idf)), variant_(variant) {
  if (idf_.size() != vectors_.vocab.size()) throw ContractError("idf table size does not match vocabulary");
  if (vectors_.input.size() != vectors_.vocab.size() * vectors_.dim)
    throw ContractError("word vector matrix size does not match vocabulary");
  for (double v : idf_)
    if (!(v >= 0.0)) throw ContractError("idf values must be non-negative");
}

W2vTfidfModel train_w2v_tfidf(std::span<const std::string> texts, const SgnsConfig& config, IdfVariant variant,
                              TrainingLog* log) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(texts.size());
  for (const auto& t : texts) docs.push_back(tokenize(t));
  return W2vTfidfModel(train_word2vec(docs, config, log), variant);
}

DenseVector embed_w2v_tfidf(const W2vTfidfModel& model, std::string_view text) {
  const auto& wv = model.vectors();
  std::map<std::uint32_t, std::uint64_t> tf;  // ordered: summation order is independent of token order
  for (const auto& token : tokenize(text))
    if (const auto i = wv.vocab.find(token)) ++tf[*i];
  if (tf.empty()) throw UndefinedEmbedding("no in-vocabulary token in document");
  if (tf.size() == 1) {
    // the weight cancels; skip the multiply/divide so the result is the word vector bit for bit
    const auto index = tf.begin()->first;
    if (!(model.idf()[index] > 0.0)) throw UndefinedEmbedding("all in-vocabulary tokens have zero idf weight");
    const auto row = wv.vector(index);
    return DenseVector(std::vector<double>(row.begin(), row.end()));
  }

  std::vector<double> sum(wv.dim, 0.0);
  double weight_total = 0.0;
  for (const auto& [index, count] : tf) {
    const double w = static_cast<double>(count) * model.idf()[index];
    const auto row = wv.vector(index);
    for (std::size_t j = 0; j < wv.dim; ++j) sum[j] += w * static_cast<double>(row[j]);
    weight_total += w;
  }
  if (weight_total <= 0.0) throw UndefinedEmbedding("all in-vocabulary tokens have zero idf weight");
  for (auto& v : sum) v /= weight_total;
  return DenseVector(std::move(sum));
}

}  // namespace patsim
