#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "patsim/dbow.hpp"
#include "patsim/external_vectors.hpp"
#include "patsim/vector.hpp"
#include "patsim/word2vec.hpp"

namespace patsim {

class W2vTfidfEmbedder final : public Embedder {
 public:
  W2vTfidfEmbedder(std::string name, std::shared_ptr<const W2vTfidfModel> model)
      : name_(std::move(name)), model_(std::move(model)) {}

  std::string_view name() const override { return name_; }
  std::size_t dim() const override { return model_->dim(); }
  DenseVector embed(const Document& doc) const override { return embed_w2v_tfidf(*model_, doc.text); }

 private:
  std::string name_;
  std::shared_ptr<const W2vTfidfModel> model_;
};

/// Trained vector when the document id was part of training, inferred vector otherwise.
class DbowEmbedder final : public Embedder {
 public:
  DbowEmbedder(std::string name, std::shared_ptr<const DbowModel> model, DbowInference inference,
               bool prefer_trained = false)
      : name_(std::move(name)), model_(std::move(model)), inference_(inference), prefer_trained_(prefer_trained) {}

  std::string_view name() const override { return name_; }
  std::size_t dim() const override { return model_->dim(); }
  DenseVector embed(const Document& doc) const override;

 private:
  std::string name_;
  std::shared_ptr<const DbowModel> model_;
  DbowInference inference_;
  bool prefer_trained_;
};

/// Looks vectors up by document id; unknown ids are UndefinedEmbedding.
class VecsEmbedder final : public Embedder {
 public:
  VecsEmbedder(std::string name, std::shared_ptr<const ExternalVectors> vectors)
      : name_(std::move(name)), vectors_(std::move(vectors)) {}

  std::string_view name() const override { return name_; }
  std::size_t dim() const override { return vectors_->dim(); }
  DenseVector embed(const Document& doc) const override { return vectors_->at(doc.id); }

 private:
  std::string name_;
  std::shared_ptr<const ExternalVectors> vectors_;
};

/// Deterministic training-free embedder: signed feature hashing of tokens into
/// `dim` buckets. Used as the stand-in reference embedder for offline runs and tests.
class HashingEmbedder final : public Embedder {
 public:
  explicit HashingEmbedder(std::size_t dim = 256, std::uint64_t salt = 0, std::string name = "hashing");

  std::string_view name() const override { return name_; }
  std::size_t dim() const override { return dim_; }
  DenseVector embed(const Document& doc) const override;

 private:
  std::size_t dim_;
  std::uint64_t salt_;
  std::string name_;
};

}  // namespace patsim
