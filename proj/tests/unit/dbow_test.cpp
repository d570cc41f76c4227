#include <gtest/gtest.h>

#include "patsim/dbow.hpp"
#include "patsim/errors.hpp"
#include "support.hpp"

namespace patsim {
namespace {

std::vector<Document> as_documents(const testing::TwoTopicCorpus& corpus) {
  std::vector<Document> docs;
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    std::string text;
    for (const auto& w : corpus.documents[i]) text += w + " ";
    docs.push_back({"D" + std::to_string(i), text});
  }
  return docs;
}

DbowConfig small_config(std::uint64_t seed) {
  DbowConfig config;
  config.dim = 20;
  config.epochs = 40;
  config.min_count = 1;
  config.seed = seed;
  return config;
}

TEST(Dbow, ZeroEpochsLeavesInitialization) {
  const auto docs = as_documents(testing::two_topic_corpus(12, 10, 8, 1));
  auto config = small_config(17);
  config.epochs = 0;
  const auto model = train_dbow(docs, config);
  EXPECT_EQ(model.doc_matrix(), dbow_initial_doc_matrix(docs.size(), 20, 17));
  for (float x : model.output_matrix()) ASSERT_EQ(x, 0.0f);
}

TEST(Dbow, SkipsDocumentsWithoutVocabulary) {
  auto docs = as_documents(testing::two_topic_corpus(10, 10, 8, 1));
  docs.push_back({"EMPTY", "  "});
  docs.push_back({"SHORT", "a b c"});
  TrainingLog log;
  const auto model = train_dbow(docs, small_config(1), &log);
  EXPECT_EQ(log.skipped_documents, 2u);
  EXPECT_EQ(model.doc_ids().size(), 10u);
  EXPECT_FALSE(model.doc_index("EMPTY"));
  EXPECT_THROW(model.trained_vector("SHORT"), UndefinedEmbedding);
}

TEST(Dbow, DuplicateIdsRejected) {
  const std::vector<Document> docs = {{"A", "alpha beta"}, {"A", "gamma delta"}};
  EXPECT_THROW(train_dbow(docs, small_config(1)), Error);
}

TEST(Dbow, DeterministicForSeed) {
  const auto docs = as_documents(testing::two_topic_corpus(30, 10, 10, 2));
  const auto a = train_dbow(docs, small_config(5));
  const auto b = train_dbow(docs, small_config(5));
  EXPECT_EQ(a.doc_matrix(), b.doc_matrix());
  EXPECT_EQ(a.output_matrix(), b.output_matrix());
  EXPECT_NE(train_dbow(docs, small_config(6)).doc_matrix(), a.doc_matrix());
}

TEST(Dbow, LossFallsUnderConstantLearningRate) {
  const auto docs = as_documents(testing::two_topic_corpus(60, 20, 15, 3));
  auto config = small_config(3);
  config.epochs = 8;
  config.lr_start = config.lr_end = 0.025f;
  TrainingLog log;
  train_dbow(docs, config, &log);
  ASSERT_EQ(log.epoch_mean_loss.size(), 8u);
  EXPECT_LT(log.epoch_mean_loss.back(), log.epoch_mean_loss.front());
}

// Documents 0 and 1 are identical topic-0 texts; document 2 is a topic-1 text.
TEST(Dbow, IdenticalDocumentsEndUpCloser) {
  double identical = 0, unrelated = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto corpus = testing::two_topic_corpus(20, 15, 25, seed);
    auto docs = as_documents(corpus);
    std::size_t topic0 = 0, topic1 = 0;
    while (corpus.topic[topic0] != 0) ++topic0;
    while (corpus.topic[topic1] != 1) ++topic1;
    const std::string same = docs[topic0].text, other = docs[topic1].text;
    docs[0].text = same;
    docs[1].text = same;
    docs[2].text = other;
    const auto model = train_dbow(docs, small_config(seed));
    identical += cosine(model.trained_vector("D0"), model.trained_vector("D1"));
    unrelated += cosine(model.trained_vector("D0"), model.trained_vector("D2"));
  }
  EXPECT_GT(identical / 5, unrelated / 5);
}

TEST(DbowInference, RecoversTrainedDocument) {
  const auto docs = as_documents(testing::two_topic_corpus(100, 20, 25, 4));
  const auto model = train_dbow(docs, small_config(4));
  DbowInference params;
  params.epochs = 40;
  double mean = 0;
  for (std::size_t i = 0; i < 10; ++i) mean += cosine(infer_dbow(model, docs[i].text, params), model.trained_vector(docs[i].id));
  EXPECT_GT(mean / 10, 0.5);
}

TEST(DbowInference, ZeroEpochsReturnsInitialVector) {
  const auto docs = as_documents(testing::two_topic_corpus(12, 10, 8, 1));
  const auto model = train_dbow(docs, small_config(1));
  const auto v = infer_dbow(model, docs[0].text, 0, 77);
  const auto init = dbow_initial_vector(20, docs[0].text, 77);
  ASSERT_EQ(v.dim(), init.size());
  for (std::size_t i = 0; i < init.size(); ++i) EXPECT_EQ(v[i], static_cast<double>(init[i]));
}

TEST(DbowInference, DeterministicAndSeeded) {
  const auto docs = as_documents(testing::two_topic_corpus(12, 10, 8, 1));
  const auto model = train_dbow(docs, small_config(1));
  const std::string text = docs[3].text;
  EXPECT_EQ(infer_dbow(model, text, 10, 5), infer_dbow(model, text, 10, 5));
  EXPECT_NE(infer_dbow(model, text, 10, 5), infer_dbow(model, text, 10, 6));
}

TEST(DbowInference, AllOutOfVocabularyIsUndefined) {
  const auto docs = as_documents(testing::two_topic_corpus(12, 10, 8, 1));
  const auto model = train_dbow(docs, small_config(1));
  EXPECT_THROW(infer_dbow(model, "zzzz qqqq", 10, 1), UndefinedEmbedding);
  EXPECT_THROW(infer_dbow(model, "", 10, 1), UndefinedEmbedding);
}

}  // namespace
}  // namespace patsim
