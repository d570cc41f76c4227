#include "patsim/dbow.hpp"

#include <numeric>
#include <thread>

#include "patsim/errors.hpp"
#include "patsim/rng.hpp"
#include "patsim/text.hpp"
#include "sgns_training.hpp"

namespace patsim {

DbowModel::DbowModel(Vocabulary vocab, std::size_t dim, std::vector<std::string> doc_ids,
                     std::vector<float> doc_vectors, std::vector<float> output)
    : vocab_(std::move(vocab)),
      dim_(dim),
      doc_ids_(std::move(doc_ids)),
      doc_vectors_(std::move(doc_vectors)),
      output_(std::move(output)) {
  if (doc_vectors_.size() != doc_ids_.size() * dim_ || output_.size() != vocab_.size() * dim_)
    throw ContractError("DbowModel matrix sizes do not match ids/vocabulary");
  doc_index_.reserve(doc_ids_.size());
  for (std::size_t i = 0; i < doc_ids_.size(); ++i)
    if (!doc_index_.emplace(doc_ids_[i], i).second) throw ContractError("duplicate document id " + doc_ids_[i]);
}

std::optional<std::size_t> DbowModel::doc_index(std::string_view id) const {
  const auto it = doc_index_.find(std::string(id));
  if (it == doc_index_.end()) return std::nullopt;
  return it->second;
}

DenseVector DbowModel::trained_vector(std::string_view id) const {
  const auto i = doc_index(id);
  if (!i) throw UndefinedEmbedding("no trained vector for document '" + std::string(id) + "'");
  const auto row = doc_vector(*i);
  return DenseVector(std::vector<double>(row.begin(), row.end()));
}

namespace {

struct Pass {
  std::size_t negatives;
  float lr_start, lr_end;
  std::uint64_t rng_key;
};

/// Runs `epochs` of PV-DBOW over one document's words; returns (loss sum, samples).
std::pair<double, std::uint64_t> train_document(float* doc_vector, std::span<const std::uint32_t> words,
                                                float* output, std::size_t dim, const detail::UnigramSampler& sampler,
                                                const Pass& pass, CounterRng& rng, double progress_begin,
                                                double progress_step, bool update_outputs,
                                                detail::SgnsScratch& scratch) {
  double loss = 0.0;
  std::vector<float*> rows;
  for (std::size_t pos = 0; pos < words.size(); ++pos) {
    const float lr = detail::linear_lr(pass.lr_start, pass.lr_end,
                                       progress_begin + progress_step * static_cast<double>(pos));
    const std::uint32_t target = words[pos];
    rows.clear();
    rows.push_back(output + target * dim);
    for (std::size_t k = 0; k < pass.negatives; ++k) {
      const std::uint32_t neg = sampler.draw(rng);
      if (neg != target) rows.push_back(output + neg * dim);
    }
    loss += detail::sgns_step(doc_vector, rows, lr, scratch, update_outputs);
  }
  return {loss, words.size()};
}

}  // namespace

DbowModel train_dbow(std::span<const Document> documents, const DbowConfig& config, TrainingLog* log) {
  if (config.dim == 0) throw ParameterError("dbow dim must be positive");
  std::vector<std::vector<std::string>> tokens;
  tokens.reserve(documents.size());
  for (const auto& doc : documents) tokens.push_back(tokenize(doc.text));
  Vocabulary vocab = Vocabulary::build(tokens, config.min_count);
  if (vocab.empty()) throw TrainingError("dbow: empty vocabulary (min_count=" + std::to_string(config.min_count) + ")");

  TrainingLog local;
  std::vector<std::string> ids;
  std::vector<std::vector<std::uint32_t>> encoded;
  for (std::size_t i = 0; i < documents.size(); ++i) {
    auto words = vocab.encode(tokens[i]);
    if (words.empty()) {
      ++local.skipped_documents;
      continue;
    }
    ids.push_back(documents[i].id);
    encoded.push_back(std::move(words));
  }

  const std::size_t d = config.dim;
  std::vector<float> doc_vectors = dbow_initial_doc_matrix(ids.size(), d, config.seed);
  std::vector<float> output(vocab.size() * d, 0.0f);
  DbowModel model(std::move(vocab), d, std::move(ids), std::move(doc_vectors), std::move(output));

  std::vector<std::uint64_t> offset(encoded.size() + 1, 0);
  for (std::size_t i = 0; i < encoded.size(); ++i) offset[i + 1] = offset[i] + encoded[i].size();
  const double total = std::max(1.0, static_cast<double>(offset.back()) * static_cast<double>(config.epochs));

  const detail::UnigramSampler sampler(model.vocab(), config.unigram_power);
  const Pass pass{config.negatives, config.lr_start, config.lr_end, derive_seed(config.seed, "dbow.train")};
  const unsigned workers = std::max(1u, config.workers);
  float* docs = model.mutable_doc_matrix().data();
  float* out = model.mutable_output_matrix().data();

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::vector<double> loss(workers, 0.0);
    std::vector<std::uint64_t> samples(workers, 0);
    auto run = [&](unsigned w) {
      detail::SgnsScratch scratch(d);
      for (std::size_t doc = w; doc < encoded.size(); doc += workers) {
        CounterRng rng(pass.rng_key, epoch * encoded.size() + doc);
        const double begin = static_cast<double>(epoch * offset.back() + offset[doc]) / total;
        const auto [l, n] = train_document(docs + doc * d, encoded[doc], out, d, sampler, pass, rng, begin,
                                           1.0 / total, true, scratch);
        loss[w] += l;
        samples[w] += n;
      }
    };
    if (workers == 1) {
      run(0);
    } else {
      std::vector<std::jthread> threads;
      for (unsigned w = 0; w < workers; ++w) threads.emplace_back(run, w);
    }
    const double epoch_loss = std::accumulate(loss.begin(), loss.end(), 0.0);
    const std::uint64_t n = std::accumulate(samples.begin(), samples.end(), std::uint64_t{0});
    local.samples += n;
    local.epoch_mean_loss.push_back(n == 0 ? 0.0 : epoch_loss / static_cast<double>(n));
  }
  if (log != nullptr) *log = std::move(local);
  return model;
}

std::vector<float> dbow_initial_doc_matrix(std::size_t documents, std::size_t dim, std::uint64_t seed) {
  std::vector<float> m(documents * dim);
  const std::uint64_t key = derive_seed(seed, "dbow.init");
  for (std::size_t i = 0; i < documents; ++i) detail::init_row(std::span(m).subspan(i * dim, dim), key, i);
  return m;
}

std::vector<float> dbow_initial_vector(std::size_t dim, std::string_view text, std::uint64_t seed) {
  std::vector<float> v(dim);
  detail::init_row(v, derive_seed(seed, "dbow.infer"), fnv1a64(text));
  return v;
}

DenseVector infer_dbow(const DbowModel& model, std::string_view text, const DbowInference& params) {
  const auto words = model.vocab().encode(tokenize(text));
  if (words.empty()) throw UndefinedEmbedding("dbow inference: every token is out of vocabulary");
  const std::size_t d = model.dim();
  std::vector<float> vec = dbow_initial_vector(d, text, params.seed);

  // Output rows are only read (update_outputs = false); the const_cast never writes.
  auto* out = const_cast<float*>(model.output_matrix().data());
  const detail::UnigramSampler sampler(model.vocab(), params.unigram_power);
  const Pass pass{params.negatives, params.lr_start, params.lr_end,
                  mix64(derive_seed(params.seed, "dbow.infer.train") ^ fnv1a64(text))};
  detail::SgnsScratch scratch(d);
  const double total = std::max(1.0, static_cast<double>(words.size() * params.epochs));
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    CounterRng rng(pass.rng_key, epoch);
    train_document(vec.data(), words, out, d, sampler, pass, rng,
                   static_cast<double>(epoch * words.size()) / total, 1.0 / total, false, scratch);
  }
  return DenseVector(std::vector<double>(vec.begin(), vec.end()));
}

}  // namespace patsim
