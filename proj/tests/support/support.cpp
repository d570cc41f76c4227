#include "support.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <random>
#include <span>
#include <sstream>
#include <unistd.h>

#include "patsim/cli.hpp"
#include "patsim/errors.hpp"
#include "patsim/sgns.hpp"

namespace patsim::testing {

std::filesystem::path data_dir() { return PATSIM_TEST_DATA; }

CliResult run_patsim(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path write_pipeline_config(const std::filesystem::path& dir, std::uint64_t seed) {
  const auto data = data_dir();
  const auto in = [&](const char* rel) { return (data / rel).string(); };
  const auto out = [&](const char* name) { return (dir / name).string(); };
  std::ostringstream c;
  c << "seed = " << seed << "\n"
    << "corpus = " << out("corpus.tsv") << "\n"
    << "ingest.cpc = " << in("pipeline/cpc.tsv") << "\n"
    << "ingest.application = " << in("pipeline/application.tsv") << "\n"
    << "ingest.patent = " << in("pipeline/patent.tsv") << "\n"
    << "triplets.output = " << out("triplets.tsv") << "\n"
    << "triplets.manifest = " << out("split") << "\n"
    << "bench.cases = " << in("bench/cases.tsv") << "\n"
    << "bench.claims = " << in("bench/claims.tsv") << "\n"
    << "bench.reference = hashing:128\n"
    << "bench.output = " << out("bench.tsv") << "\n"
    << "eval.bench = " << out("bench.tsv") << "\n"
    << "eval.models = h1=hashing:64:1,h2=hashing:64:2,h3=hashing:32:3\n"
    << "eval.subset = h1,h2\n"
    << "eval.scores = " << out("scores.tsv") << "\n"
    << "eval.report = " << out("report.txt") << "\n";
  const auto path = dir / "pipeline.conf";
  write_file(path, c.str());
  return path;
}

std::vector<std::string> pipeline_artifacts() {
  return {"corpus.tsv",       "corpus.tsv.provenance", "triplets.tsv",         "split.train.idx",
          "split.validation.idx", "split.meta.json",  "split.trainer.json",   "bench.tsv",
          "bench.tsv.provenance", "scores.tsv",       "report.txt"};
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("patsim-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

PatentRecord make_record(std::string id, std::string_view iso_date, std::string_view symbol, std::string abstract) {
  PatentRecord r;
  r.patent_id = std::move(id);
  r.filing_date = parse_iso_date(iso_date).value();
  r.filing_year = r.filing_date.year;
  r.abstract = std::move(abstract);
  auto cpc = parse_cpc_symbol(symbol).value();
  cpc.patent_id = r.patent_id;
  r.cpc.push_back(cpc);
  return r;
}

PatentCorpus make_corpus(std::vector<PatentRecord> records) {
  std::map<std::string, PatentRecord> map;
  for (auto& r : records) {
    auto id = r.patent_id;
    map.emplace(std::move(id), std::move(r));
  }
  return PatentCorpus(std::move(map), Provenance{});
}

PatentCorpus random_corpus(const CorpusShape& shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> symbols;
  for (std::size_t s = 0; s < shape.symbols; ++s)
    symbols.push_back("H04L" + std::to_string(1 + s / 50) + "/" + std::to_string(10 + s % 50));
  std::vector<PatentRecord> records;
  std::vector<std::string> abstracts;
  for (std::size_t i = 0; i < shape.patents; ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "US%07zu", i);
    const auto& symbol = symbols[rng() % symbols.size()];
    const int year = shape.first_year + static_cast<int>(rng() % static_cast<std::uint64_t>(shape.years));
    std::string abstract;
    if (!abstracts.empty() && std::uniform_real_distribution<double>(0, 1)(rng) < shape.duplicate_abstract_rate)
      abstract = abstracts[rng() % abstracts.size()];
    else
      abstract = "abstract number " + std::to_string(i) + " about widget " + std::to_string(rng() % 97);
    abstracts.push_back(abstract);
    records.push_back(make_record(id, std::to_string(year) + "-06-15", symbol, abstract));
  }
  return make_corpus(std::move(records));
}

std::string TwoTopicCorpus::word(int topic, std::size_t i) {
  return std::string(topic == 0 ? "ta" : "tb") + std::to_string(i);
}

TwoTopicCorpus two_topic_corpus(std::size_t documents, std::size_t words_per_topic, std::size_t length,
                                std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  TwoTopicCorpus c;
  c.words_per_topic = words_per_topic;
  for (std::size_t d = 0; d < documents; ++d) {
    const int topic = static_cast<int>(d % 2);
    std::vector<std::string> doc;
    for (std::size_t t = 0; t < length; ++t) doc.push_back(TwoTopicCorpus::word(topic, rng() % words_per_topic));
    c.documents.push_back(std::move(doc));
    c.topic.push_back(topic);
  }
  return c;
}

StubEmbedder::StubEmbedder(std::string name, std::map<std::string, std::vector<double>> vectors)
    : name_(std::move(name)), vectors_(std::move(vectors)) {
  if (!vectors_.empty()) dim_ = vectors_.begin()->second.size();
}

DenseVector StubEmbedder::embed(const Document& doc) const {
  const auto it = vectors_.find(doc.id);
  if (it == vectors_.end()) throw UndefinedEmbedding("stub has no vector for " + doc.id);
  return DenseVector(it->second);
}

double naive_cosine(const std::vector<double>& a, const std::vector<double>& b) {
  long double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += static_cast<long double>(a[i]) * b[i];
    aa += static_cast<long double>(a[i]) * a[i];
    bb += static_cast<long double>(b[i]) * b[i];
  }
  return static_cast<double>(ab / (std::sqrt(aa) * std::sqrt(bb)));
}

std::uint64_t brute_force_pair_count(const PatentCorpus& corpus) {
  struct Flat {
    std::string symbol;
    int year;
    const std::string* abstract;
  };
  std::vector<Flat> all;
  for (const auto& [id, r] : corpus.records()) all.push_back({r.cpc.front().full_symbol(), r.filing_year, &r.abstract});
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (all[i].year == all[j].year && all[i].symbol == all[j].symbol && *all[i].abstract != *all[j].abstract)
        ++count;
  return count;
}

namespace {

using Matrix = std::vector<std::vector<double>>;

// -log s(u0.v) - sum_{r>0} log(1 - s(ur.v)), written out directly.
double reference_sgns_loss(const std::vector<double>& v, const Matrix& u) {
  double loss = 0;
  for (std::size_t r = 0; r < u.size(); ++r) {
    double s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * u[r][i];
    const double p = 1.0 / (1.0 + std::exp(-s));
    loss -= r == 0 ? std::log(p) : std::log(1.0 - p);
  }
  return loss;
}

double relative_error(const std::vector<double>& a, const std::vector<double>& b) {
  double diff = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  const double scale = std::max(std::sqrt(na), std::sqrt(nb));
  return scale < 1e-12 ? std::sqrt(diff) : std::sqrt(diff) / scale;
}

std::vector<std::span<const double>> views(const Matrix& m) {
  std::vector<std::span<const double>> out;
  for (const auto& row : m) out.emplace_back(row);
  return out;
}

constexpr double kStep = 1e-5;

// Central difference of f along every coordinate of x.
template <class F>
std::vector<double> numeric_gradient(std::vector<double> x, F&& f) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + kStep;
    const double plus = f(x);
    x[i] = keep - kStep;
    const double minus = f(x);
    x[i] = keep;
    g[i] = (plus - minus) / (2 * kStep);
  }
  return g;
}

std::vector<double> flatten(const Matrix& m) {
  std::vector<double> out;
  for (const auto& row : m) out.insert(out.end(), row.begin(), row.end());
  return out;
}

Matrix unflatten(const std::vector<double>& flat, std::size_t cols) {
  Matrix m(flat.size() / cols);
  for (std::size_t r = 0; r < m.size(); ++r) m[r].assign(flat.begin() + r * cols, flat.begin() + (r + 1) * cols);
  return m;
}

}  // namespace

GradientCheck sgns_gradient_check(std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 0.5);
  GradientCheck worst;
  for (int sample = 0; sample < samples; ++sample) {
    const std::size_t d = 5 + rng() % 46, k = 1 + rng() % 10;
    std::vector<double> v(d);
    Matrix u(k + 1, std::vector<double>(d));
    for (auto& x : v) x = normal(rng);
    for (auto& row : u)
      for (auto& x : row) x = normal(rng);

    std::vector<double> gv(d), gu((k + 1) * d);
    const auto rows = views(u);
    sgns_gradient<double>(v, rows, gv, gu);

    const auto fv = numeric_gradient(v, [&](const std::vector<double>& x) { return reference_sgns_loss(x, u); });
    const auto fu = numeric_gradient(flatten(u), [&](const std::vector<double>& x) {
      return reference_sgns_loss(v, unflatten(x, d));
    });
    worst.center_error = std::max(worst.center_error, relative_error(gv, fv));
    worst.output_error = std::max(worst.output_error, relative_error(gu, fu));
  }
  return worst;
}

GradientCheck dbow_gradient_check(std::uint64_t seed, int samples) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 0.5);
  GradientCheck worst;
  for (int sample = 0; sample < samples; ++sample) {
    const std::size_t d = 4 + rng() % 30, vocab = 3 + rng() % 12, words = 1 + rng() % 8, k = 1 + rng() % 5;
    std::vector<double> doc(d);
    for (auto& x : doc) x = normal(rng);
    Matrix table(vocab, std::vector<double>(d));
    for (auto& row : table)
      for (auto& x : row) x = normal(rng);
    std::vector<std::vector<std::size_t>> terms;  // per word: target row, then negative rows
    for (std::size_t w = 0; w < words; ++w) {
      std::vector<std::size_t> term = {rng() % vocab};
      for (std::size_t n = 0; n < k; ++n) term.push_back(rng() % vocab);
      terms.push_back(term);
    }
    auto loss = [&](const std::vector<double>& dv, const Matrix& t) {
      double total = 0;
      for (const auto& term : terms) {
        Matrix rows;
        for (auto r : term) rows.push_back(t[r]);
        total += reference_sgns_loss(dv, rows);
      }
      return total;
    };

    std::vector<double> g_doc(d, 0.0), g_table(vocab * d, 0.0);
    for (const auto& term : terms) {
      Matrix rows;
      for (auto r : term) rows.push_back(table[r]);
      const auto row_views = views(rows);
      std::vector<double> gc(d), gr(rows.size() * d);
      sgns_gradient<double>(doc, row_views, gc, gr);
      for (std::size_t i = 0; i < d; ++i) g_doc[i] += gc[i];
      for (std::size_t r = 0; r < term.size(); ++r)
        for (std::size_t i = 0; i < d; ++i) g_table[term[r] * d + i] += gr[r * d + i];
    }

    const auto f_doc = numeric_gradient(doc, [&](const std::vector<double>& x) { return loss(x, table); });
    const auto f_table = numeric_gradient(flatten(table), [&](const std::vector<double>& x) {
      return loss(doc, unflatten(x, d));
    });
    worst.center_error = std::max(worst.center_error, relative_error(g_doc, f_doc));
    worst.output_error = std::max(worst.output_error, relative_error(g_table, f_table));
  }
  return worst;
}

namespace {

void scan(const Rows& rows, bool highest, std::vector<std::uint64_t>& wins, std::uint64_t& ties,
          std::uint64_t& denominator, std::size_t models) {
  wins.assign(models, 0);
  for (const auto& row : rows) {
    bool complete = true;
    for (const auto& v : row) complete = complete && v.has_value();
    if (!complete) continue;
    ++denominator;
    // count how many columns attain the extreme
    double extreme = *row[0];
    for (const auto& v : row) extreme = highest ? std::max(extreme, *v) : std::min(extreme, *v);
    std::vector<std::size_t> at;
    for (std::size_t m = 0; m < row.size(); ++m)
      if (*row[m] == extreme) at.push_back(m);
    if (at.size() == 1)
      ++wins[at[0]];
    else
      ++ties;
  }
}

}  // namespace

BruteWins brute_force_wins(const Rows& true_rows, const Rows& random_rows) {
  const std::size_t models = true_rows.empty() ? random_rows.front().size() : true_rows.front().size();
  BruteWins b;
  scan(true_rows, true, b.max_wins, b.max_ties, b.max_denominator, models);
  scan(random_rows, false, b.min_wins, b.min_ties, b.min_denominator, models);
  return b;
}

ScoreMatrix to_matrix(PairKind kind, const std::vector<std::string>& models, const Rows& rows) {
  ScoreMatrix m(kind, models);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<ScoreCell> cells;
    for (const auto& v : rows[r]) cells.push_back(v ? ScoreCell{*v, ""} : ScoreCell{std::nullopt, "stub"});
    m.add_row("p" + std::to_string(r), std::move(cells));
  }
  return m;
}

Rows random_rows(std::mt19937_64& rng, std::size_t rows, std::size_t models, double undefined_rate) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Rows out(rows, std::vector<std::optional<double>>(models));
  for (auto& row : out) {
    for (auto& v : row) {
      if (unit(rng) < undefined_rate) continue;
      v = static_cast<double>(static_cast<int>(rng() % 21) - 10) / 10.0;  // grid of 21 values in [-1, 1]
    }
    if (models > 1 && unit(rng) < 0.1) {
      // force a tie at the row maximum or minimum
      const std::size_t a = rng() % models, b = (a + 1 + rng() % (models - 1)) % models;
      if (row[a] && row[b]) row[b] = row[a];
    }
  }
  return out;
}

}  // namespace patsim::testing
