#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "patsim/bench.hpp"
#include "patsim/table.hpp"
#include "patsim/vector.hpp"

namespace patsim {

enum class ModelFamily { Static, Contextual };

struct ModelEntry {
  std::string name;
  std::shared_ptr<const Embedder> embedder;
  ModelFamily family = ModelFamily::Static;
};

enum class PairKind { True, Random };

struct ScoreCell {
  std::optional<double> value;
  std::string reason;  // set when value is empty

  bool defined() const { return value.has_value(); }
};

/// Rows are benchmark pairs, columns are models.
class ScoreMatrix {
 public:
  ScoreMatrix(PairKind kind, std::vector<std::string> models);

  void add_row(std::string pair_id, std::vector<ScoreCell> cells);

  PairKind kind() const { return kind_; }
  const std::vector<std::string>& models() const { return models_; }
  std::size_t row_count() const { return pair_ids_.size(); }
  std::size_t model_count() const { return models_.size(); }
  const std::string& pair_id(std::size_t row) const { return pair_ids_[row]; }
  const ScoreCell& cell(std::size_t row, std::size_t model) const { return cells_[row][model]; }
  std::span<const ScoreCell> row(std::size_t r) const { return cells_[r]; }

  /// True when every model has a defined score on the row.
  bool row_complete(std::size_t row) const;
  /// Pair ids of incomplete rows, in row order.
  std::vector<std::string> excluded_rows() const;

  /// Columns restricted to `names` (in the given order). Unknown names throw ParameterError.
  ScoreMatrix restrict_to(std::span<const std::string> names) const;

 private:
  PairKind kind_;
  std::vector<std::string> models_;
  std::vector<std::string> pair_ids_;
  std::vector<std::vector<ScoreCell>> cells_;
};

/// Cosine of every (pair, model) cell. Failures become undefined cells with a reason
/// code ("undefined-embedding", "undefined-similarity", "error").
std::pair<ScoreMatrix, ScoreMatrix> score_all(std::span<const ModelEntry> models, const BenchmarkDataset& bench,
                                              unsigned workers = 1);

struct ModelWinRate {
  std::string model;
  std::uint64_t max_wins = 0;  // true pairs with the strictly highest cosine
  std::uint64_t min_wins = 0;  // random pairs with the strictly lowest cosine
  double max_pct = 0.0;
  double min_pct = 0.0;
};

struct WinRateTable {
  std::vector<ModelWinRate> models;
  std::uint64_t max_denominator = 0;  // complete true rows
  std::uint64_t min_denominator = 0;  // complete random rows
  std::uint64_t max_ties = 0;
  std::uint64_t min_ties = 0;
  std::vector<std::string> excluded_true;
  std::vector<std::string> excluded_random;
};

/// Rows with any undefined cell are excluded for every model. A row whose extreme
/// value is shared by two or more models counts as a tie and awards no win.
WinRateTable win_rates(const ScoreMatrix& true_scores, const ScoreMatrix& random_scores);

/// Win rates recomputed over the named columns only. An empty name list yields an
/// empty table.
WinRateTable subset_table(const ScoreMatrix& true_scores, const ScoreMatrix& random_scores,
                          std::span<const std::string> names);

struct ScoreSummary {
  std::string model;
  PairKind kind = PairKind::True;
  std::uint64_t count = 0;
  double mean = 0.0, min = 0.0, median = 0.0, max = 0.0;
};

/// Distribution of defined scores per model.
std::vector<ScoreSummary> summarize_scores(const ScoreMatrix& scores);

/// "PATSIM-SCORES v1\tmodels=<k>\ttrue=<n>\trandom=<m>", k "M\t<name>" lines, then
/// "T"/"R" rows: pair id and one value per model ("NA:<reason>" when undefined).
void write_scores(std::ostream& out, const ScoreMatrix& true_scores, const ScoreMatrix& random_scores);
std::pair<ScoreMatrix, ScoreMatrix> read_scores(LineSource& source);

}  // namespace patsim
