#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "patsim/bench.hpp"
#include "patsim/corpus.hpp"
#include "patsim/eval.hpp"
#include "patsim/vector.hpp"

namespace patsim::testing {

std::filesystem::path data_dir();

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, std::string_view content);

struct CliResult {
  int code = 0;
  std::string out, err;
};
/// Runs the command line in-process ("patsim" is implied).
CliResult run_patsim(std::vector<std::string> args);

/// Config file in `dir` for the fixture pipeline: ingest -> triplets -> bench (hashing
/// reference) -> eval (three hashing models). All outputs land in `dir`.
std::filesystem::path write_pipeline_config(const std::filesystem::path& dir, std::uint64_t seed);

/// Pipeline artifacts compared by determinism checks, relative to the pipeline dir.
std::vector<std::string> pipeline_artifacts();
std::string read_file(const std::filesystem::path& path);

PatentRecord make_record(std::string id, std::string_view iso_date, std::string_view symbol, std::string abstract);
PatentCorpus make_corpus(std::vector<PatentRecord> records);

struct CorpusShape {
  std::size_t patents = 100;
  std::size_t symbols = 10;
  int first_year = 2000;
  int years = 3;
  double duplicate_abstract_rate = 0.05;  // chance of copying an earlier abstract verbatim
};
PatentCorpus random_corpus(const CorpusShape& shape, std::uint64_t seed);

/// Two disjoint vocabularies ("ta<i>", "tb<i>"); each document draws only from one.
struct TwoTopicCorpus {
  std::vector<std::vector<std::string>> documents;
  std::vector<int> topic;
  std::size_t words_per_topic = 0;
  static std::string word(int topic, std::size_t i);
};
TwoTopicCorpus two_topic_corpus(std::size_t documents, std::size_t words_per_topic, std::size_t length,
                                std::uint64_t seed);

/// Vectors keyed by document id; unknown ids are undefined.
class StubEmbedder final : public Embedder {
 public:
  StubEmbedder(std::string name, std::map<std::string, std::vector<double>> vectors);
  std::string_view name() const override { return name_; }
  std::size_t dim() const override { return dim_; }
  DenseVector embed(const Document& doc) const override;

 private:
  std::string name_;
  std::size_t dim_ = 0;
  std::map<std::string, std::vector<double>> vectors_;
};

// ---- oracles: deliberately naive, share no code with the library ----

double naive_cosine(const std::vector<double>& a, const std::vector<double>& b);

/// Pairs of patents with equal (symbol, year) and different abstracts, by double loop.
std::uint64_t brute_force_pair_count(const PatentCorpus& corpus);

/// Largest norm-wise relative error between analytic gradients and central finite
/// differences (h = 1e-5) of an independently written loss, over `samples` random draws.
struct GradientCheck {
  double center_error = 0.0;  // center / document vector
  double output_error = 0.0;  // output rows
};
GradientCheck sgns_gradient_check(std::uint64_t seed, int samples);
/// Document-level PV-DBOW objective: all words of a document predicted from one
/// document vector, output rows shared between words.
GradientCheck dbow_gradient_check(std::uint64_t seed, int samples);

using Rows = std::vector<std::vector<std::optional<double>>>;

struct BruteWins {
  std::vector<std::uint64_t> max_wins, min_wins;
  std::uint64_t max_ties = 0, min_ties = 0, max_denominator = 0, min_denominator = 0;
};
BruteWins brute_force_wins(const Rows& true_rows, const Rows& random_rows);

ScoreMatrix to_matrix(PairKind kind, const std::vector<std::string>& models, const Rows& rows);

/// Scores on a coarse grid so ties occur; some rows get a shared value on purpose.
Rows random_rows(std::mt19937_64& rng, std::size_t rows, std::size_t models, double undefined_rate);

}  // namespace patsim::testing
