#include "patsim/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <set>
#include <unordered_map>
#include <variant>

#include "patsim/errors.hpp"
#include "patsim/external_vectors.hpp"
#include "parallel.hpp"

namespace patsim {

ScoreMatrix::ScoreMatrix(PairKind kind, std::vector<std::string> models) : kind_(kind), models_(std::move(models)) {
  std::set<std::string_view> unique(models_.begin(), models_.end());
  if (unique.size() != models_.size()) throw ParameterError("model names must be unique");
}

void ScoreMatrix::add_row(std::string pair_id, std::vector<ScoreCell> cells) {
  if (cells.size() != models_.size()) throw ContractError("score row width does not match model count");
  for (const auto& c : cells)
    if (c.value && !(*c.value >= -1.0 && *c.value <= 1.0)) throw ContractError("score outside [-1, 1]");
  pair_ids_.push_back(std::move(pair_id));
  cells_.push_back(std::move(cells));
}

bool ScoreMatrix::row_complete(std::size_t row) const {
  return std::all_of(cells_[row].begin(), cells_[row].end(), [](const ScoreCell& c) { return c.defined(); });
}

std::vector<std::string> ScoreMatrix::excluded_rows() const {
  std::vector<std::string> out;
  for (std::size_t r = 0; r < row_count(); ++r)
    if (!row_complete(r)) out.push_back(pair_ids_[r]);
  return out;
}

ScoreMatrix ScoreMatrix::restrict_to(std::span<const std::string> names) const {
  std::vector<std::size_t> columns;
  for (const auto& name : names) {
    const auto it = std::find(models_.begin(), models_.end(), name);
    if (it == models_.end()) throw ParameterError("unknown model '" + name + "'");
    columns.push_back(static_cast<std::size_t>(it - models_.begin()));
  }
  ScoreMatrix out(kind_, std::vector<std::string>(names.begin(), names.end()));
  for (std::size_t r = 0; r < row_count(); ++r) {
    std::vector<ScoreCell> cells;
    cells.reserve(columns.size());
    for (auto c : columns) cells.push_back(cells_[r][c]);
    out.add_row(pair_ids_[r], std::move(cells));
  }
  return out;
}

namespace {

using VectorCache = std::unordered_map<std::string, std::variant<DenseVector, std::string>>;

const std::variant<DenseVector, std::string>& embed_cached(const Embedder& embedder, const ClaimRecord& claim,
                                                           VectorCache& cache) {
  std::string key = claim.key();
  if (const auto it = cache.find(key); it != cache.end()) return it->second;
  std::variant<DenseVector, std::string> result = std::string("error");
  try {
    result = embedder.embed(Document{key, claim.text});
  } catch (const UndefinedEmbedding&) {
    result = std::string("undefined-embedding");
  } catch (const Error&) {
    result = std::string("error");
  }
  return cache.emplace(std::move(key), std::move(result)).first->second;
}

ScoreCell score_pair(const Embedder& embedder, const ClaimPair& pair, VectorCache& cache) {
  const auto& a = embed_cached(embedder, pair.claim_a, cache);
  const auto& b = embed_cached(embedder, pair.claim_b, cache);
  if (const auto* reason = std::get_if<std::string>(&a)) return ScoreCell{std::nullopt, *reason};
  if (const auto* reason = std::get_if<std::string>(&b)) return ScoreCell{std::nullopt, *reason};
  try {
    return ScoreCell{cosine(std::get<DenseVector>(a), std::get<DenseVector>(b)), ""};
  } catch (const UndefinedSimilarity&) {
    return ScoreCell{std::nullopt, "undefined-similarity"};
  } catch (const Error&) {
    return ScoreCell{std::nullopt, "error"};
  }
}

}  // namespace

std::pair<ScoreMatrix, ScoreMatrix> score_all(std::span<const ModelEntry> models, const BenchmarkDataset& bench,
                                              unsigned workers) {
  if (models.empty()) throw ParameterError("score_all: no models registered");
  std::vector<std::string> names;
  for (const auto& m : models) {
    if (!m.embedder) throw ParameterError("model '" + m.name + "' has no embedder");
    names.push_back(m.name);
  }
  const std::size_t n_true = bench.true_pairs.size(), n_random = bench.random_pairs.size();
  // columns[model][row], true rows first
  std::vector<std::vector<ScoreCell>> columns(models.size(), std::vector<ScoreCell>(n_true + n_random));
  detail::parallel_for(models.size(), workers, [&](std::size_t m) {
    VectorCache cache;
    for (std::size_t r = 0; r < n_true; ++r)
      columns[m][r] = score_pair(*models[m].embedder, bench.true_pairs[r], cache);
    for (std::size_t r = 0; r < n_random; ++r)
      columns[m][n_true + r] = score_pair(*models[m].embedder, bench.random_pairs[r], cache);
  });

  ScoreMatrix true_scores(PairKind::True, names), random_scores(PairKind::Random, names);
  auto row_at = [&](std::size_t r) {
    std::vector<ScoreCell> row;
    row.reserve(models.size());
    for (std::size_t m = 0; m < models.size(); ++m) row.push_back(columns[m][r]);
    return row;
  };
  for (std::size_t r = 0; r < n_true; ++r) true_scores.add_row(bench.true_pairs[r].pair_id(), row_at(r));
  for (std::size_t r = 0; r < n_random; ++r)
    random_scores.add_row(bench.random_pairs[r].pair_id(), row_at(n_true + r));
  return {std::move(true_scores), std::move(random_scores)};
}

namespace {

/// Counts strict-extreme wins per column over complete rows.
void tally(const ScoreMatrix& scores, bool highest, std::vector<std::uint64_t>& wins, std::uint64_t& ties,
           std::uint64_t& denominator) {
  wins.assign(scores.model_count(), 0);
  ties = 0;
  denominator = 0;
  for (std::size_t r = 0; r < scores.row_count(); ++r) {
    if (!scores.row_complete(r)) continue;
    ++denominator;
    std::size_t best = 0;
    std::size_t count = 1;
    double best_value = *scores.cell(r, 0).value;
    for (std::size_t m = 1; m < scores.model_count(); ++m) {
      const double v = *scores.cell(r, m).value;
      if (highest ? v > best_value : v < best_value) {
        best = m;
        best_value = v;
        count = 1;
      } else if (v == best_value) {
        ++count;
      }
    }
    if (count == 1)
      ++wins[best];
    else
      ++ties;
  }
}

double percent(std::uint64_t wins, std::uint64_t denominator) {
  return denominator == 0 ? 0.0 : 100.0 * static_cast<double>(wins) / static_cast<double>(denominator);
}

}  // namespace

WinRateTable win_rates(const ScoreMatrix& true_scores, const ScoreMatrix& random_scores) {
  if (true_scores.models() != random_scores.models())
    throw ParameterError("win_rates: true and random matrices have different rosters");
  if (true_scores.model_count() == 0 || true_scores.row_count() == 0 || random_scores.row_count() == 0)
    throw ParameterError("win_rates: empty score matrix");
  if (true_scores.kind() != PairKind::True || random_scores.kind() != PairKind::Random)
    throw ParameterError("win_rates: matrices passed in the wrong order");

  WinRateTable table;
  std::vector<std::uint64_t> max_wins, min_wins;
  tally(true_scores, true, max_wins, table.max_ties, table.max_denominator);
  tally(random_scores, false, min_wins, table.min_ties, table.min_denominator);
  for (std::size_t m = 0; m < true_scores.model_count(); ++m) {
    table.models.push_back(ModelWinRate{true_scores.models()[m], max_wins[m], min_wins[m],
                                        percent(max_wins[m], table.max_denominator),
                                        percent(min_wins[m], table.min_denominator)});
  }
  table.excluded_true = true_scores.excluded_rows();
  table.excluded_random = random_scores.excluded_rows();
  return table;
}

WinRateTable subset_table(const ScoreMatrix& true_scores, const ScoreMatrix& random_scores,
                          std::span<const std::string> names) {
  if (names.empty()) return WinRateTable{};
  return win_rates(true_scores.restrict_to(names), random_scores.restrict_to(names));
}

std::vector<ScoreSummary> summarize_scores(const ScoreMatrix& scores) {
  std::vector<ScoreSummary> out;
  for (std::size_t m = 0; m < scores.model_count(); ++m) {
    std::vector<double> values;
    for (std::size_t r = 0; r < scores.row_count(); ++r)
      if (const auto& c = scores.cell(r, m); c.value) values.push_back(*c.value);
    ScoreSummary s;
    s.model = scores.models()[m];
    s.kind = scores.kind();
    s.count = values.size();
    if (!values.empty()) {
      std::sort(values.begin(), values.end());
      double sum = 0.0;
      for (double v : values) sum += v;
      s.mean = sum / static_cast<double>(values.size());
      s.min = values.front();
      s.max = values.back();
      const std::size_t mid = values.size() / 2;
      s.median = values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

void write_scores(std::ostream& out, const ScoreMatrix& true_scores, const ScoreMatrix& random_scores) {
  if (true_scores.models() != random_scores.models()) throw ParameterError("write_scores: roster mismatch");
  out << "PATSIM-SCORES v1\tmodels=" << true_scores.model_count() << "\ttrue=" << true_scores.row_count()
      << "\trandom=" << random_scores.row_count() << '\n';
  for (const auto& m : true_scores.models()) out << "M\t" << m << '\n';
  for (const auto* scores : {&true_scores, &random_scores}) {
    const char tag = scores->kind() == PairKind::True ? 'T' : 'R';
    for (std::size_t r = 0; r < scores->row_count(); ++r) {
      out << tag << '\t' << scores->pair_id(r);
      for (const auto& c : scores->row(r)) out << '\t' << (c.value ? format_double(*c.value) : "NA:" + c.reason);
      out << '\n';
    }
  }
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t pos; (pos = line.find('\t', start)) != std::string_view::npos; start = pos + 1)
    out.push_back(line.substr(start, pos - start));
  out.push_back(line.substr(start));
  return out;
}

std::size_t header_count(std::string_view field, std::string_view key) {
  std::size_t v = 0;
  if (!field.starts_with(key)) throw FormatError("PATSIM-SCORES: expected '" + std::string(key) + "'", 1);
  field.remove_prefix(key.size());
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) throw FormatError("PATSIM-SCORES: bad header", 1);
  return v;
}

}  // namespace

std::pair<ScoreMatrix, ScoreMatrix> read_scores(LineSource& source) {
  std::string line;
  if (!source.next_line(line)) throw FormatError("PATSIM-SCORES: empty file", 1);
  const auto header = split_tabs(line);
  if (header.size() != 4 || header[0] != "PATSIM-SCORES v1") throw FormatError("not a PATSIM-SCORES v1 file", 1);
  const std::size_t k = header_count(header[1], "models="), n_true = header_count(header[2], "true="),
                    n_random = header_count(header[3], "random=");
  std::uint64_t line_no = 1;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < k; ++i) {
    if (!source.next_line(line)) throw FormatError("PATSIM-SCORES: truncated model list", line_no);
    ++line_no;
    const auto f = split_tabs(line);
    if (f.size() != 2 || f[0] != "M") throw FormatError("PATSIM-SCORES: expected model line", line_no);
    names.emplace_back(f[1]);
  }
  ScoreMatrix true_scores(PairKind::True, names), random_scores(PairKind::Random, names);
  while (source.next_line(line)) {
    ++line_no;
    const auto f = split_tabs(line);
    if (f.size() != k + 2 || (f[0] != "T" && f[0] != "R")) throw FormatError("PATSIM-SCORES: bad row", line_no);
    std::vector<ScoreCell> cells;
    for (std::size_t m = 0; m < k; ++m) {
      const auto v = f[m + 2];
      if (v.starts_with("NA:")) {
        cells.push_back(ScoreCell{std::nullopt, std::string(v.substr(3))});
        continue;
      }
      double d = 0.0;
      const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
      if (ec != std::errc{} || ptr != v.data() + v.size()) throw FormatError("PATSIM-SCORES: bad value", line_no);
      cells.push_back(ScoreCell{d, ""});
    }
    (f[0] == "T" ? true_scores : random_scores).add_row(std::string(f[1]), std::move(cells));
  }
  if (true_scores.row_count() != n_true || random_scores.row_count() != n_random)
    throw FormatError("PATSIM-SCORES: row counts do not match header", 0);
  return {std::move(true_scores), std::move(random_scores)};
}

}  // namespace patsim
