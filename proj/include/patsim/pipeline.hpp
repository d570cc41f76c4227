#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "patsim/config.hpp"
#include "patsim/eval.hpp"
#include "patsim/report.hpp"

namespace patsim {

/// Line-delimited key=value records, each tagged with the stage.
class RunLog {
 public:
  RunLog(std::ostream& out, std::string stage) : out_(out), stage_(std::move(stage)) {}
  void record(std::initializer_list<std::pair<std::string_view, std::string>> fields);
  void counter(std::string_view key, std::uint64_t value);
  /// Master seed plus every stage seed, with their origin.
  void seed_chain(const RunConfig& config);

 private:
  std::ostream& out_;
  std::string stage_;
};

/// "w2v:<checkpoint>", "dbow:<checkpoint>" (always infers), "dbow-trained:<checkpoint>"
/// (stored vector when the id was a training document), "vecs:<file>", "hashing:<dim>[:<salt>]".
struct ModelSpec {
  enum class Kind { W2v, Dbow, DbowTrained, Vecs, Hashing };
  Kind kind = Kind::Hashing;
  std::string path;
  std::uint64_t dim = 0;
  std::uint64_t salt = 0;
};

ModelSpec parse_model_spec(std::string_view spec);
/// "name=spec,name=spec". Names must be unique.
std::vector<std::pair<std::string, ModelSpec>> parse_roster(std::string_view roster);
ModelEntry load_model(std::string name, const ModelSpec& spec, const RunConfig& config);

/// Report sections for a scored benchmark: the full roster, then the subset when one is named.
Report build_report(const ScoreMatrix& true_scores, const ScoreMatrix& random_scores,
                    const std::vector<std::string>& subset, const RunConfig& config);

// Each command validates the config before opening any input.
void cmd_ingest(const RunConfig& config, std::ostream& log);
void cmd_triplets(const RunConfig& config, std::ostream& log);
void cmd_bench(const RunConfig& config, std::ostream& log);
void cmd_train_w2v(const RunConfig& config, std::ostream& log);
void cmd_train_dbow(const RunConfig& config, std::ostream& log);
void cmd_embed(const RunConfig& config, std::ostream& log);
/// Scores the benchmark, writes the scores file and the report ("-" goes to `out`).
void cmd_eval(const RunConfig& config, std::ostream& log, std::ostream& out);
/// Re-renders a report from a scores file.
void cmd_report(const RunConfig& config, std::ostream& log, std::ostream& out);

}  // namespace patsim
