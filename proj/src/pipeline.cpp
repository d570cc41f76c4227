#include "patsim/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "patsim/bench.hpp"
#include "patsim/checkpoint.hpp"
#include "patsim/corpus.hpp"
#include "patsim/dbow.hpp"
#include "patsim/embedders.hpp"
#include "patsim/errors.hpp"
#include "patsim/external_vectors.hpp"
#include "patsim/triplet_loss.hpp"
#include "patsim/triplets.hpp"
#include "patsim/word2vec.hpp"

namespace patsim {

void RunLog::record(std::initializer_list<std::pair<std::string_view, std::string>> fields) {
  out_ << "stage=" << stage_;
  for (const auto& [k, v] : fields) out_ << ' ' << k << '=' << v;
  out_ << '\n';
}

void RunLog::counter(std::string_view key, std::uint64_t value) { record({{key, std::to_string(value)}}); }

void RunLog::seed_chain(const RunConfig& config) {
  record({{"seed", "master"}, {"value", config.get("seed")}, {"origin", "config"}});
  for (const auto stage : seeded_stages())
    record({{"seed", std::string(stage)},
            {"value", std::to_string(config.stage_seed(stage))},
            {"origin", config.stage_seed_explicit(stage) ? "explicit" : "derived"}});
}

namespace {

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw ConfigError("bad " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

/// Writes through a temporary file so a failed stage never leaves a partial artifact.
void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    body(out);
    out.flush();
    if (!out) throw IoError("write failed for '" + path.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

const std::string& required(const RunConfig& config, std::string_view key) {
  const auto& v = config.get(key);
  if (v.empty()) throw ConfigError(std::string(key) + " is not set");
  return v;
}

PatentCorpus load_corpus(const RunConfig& config) {
  auto source = open_lines(required(config, "corpus"));
  return read_corpus(*source);
}

void log_table(RunLog& log, std::string_view table, const TableCounters& c) {
  log.record({{"table", std::string(table)},
              {"read", std::to_string(c.read)},
              {"yielded", std::to_string(c.yielded)},
              {"malformed", std::to_string(c.malformed)}});
}

void add_table(Provenance& p, std::string_view table, const TableCounters& c) {
  const std::string prefix = "table." + std::string(table) + ".";
  p.set(prefix + "read", c.read);
  p.set(prefix + "malformed", c.malformed);
}

std::string format_real(double v) { return format_double(v); }

}  // namespace

ModelSpec parse_model_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos || colon + 1 == spec.size())
    throw ConfigError("model spec '" + std::string(spec) + "' is not kind:argument");
  const auto kind = spec.substr(0, colon);
  const auto arg = spec.substr(colon + 1);
  ModelSpec out;
  if (kind == "hashing") {
    out.kind = ModelSpec::Kind::Hashing;
    const auto sep = arg.find(':');
    out.dim = parse_u64(arg.substr(0, sep), "hashing dimension");
    if (out.dim == 0) throw ConfigError("hashing dimension must be positive");
    if (sep != std::string_view::npos) out.salt = parse_u64(arg.substr(sep + 1), "hashing salt");
    return out;
  }
  out.path = std::string(arg);
  if (kind == "w2v")
    out.kind = ModelSpec::Kind::W2v;
  else if (kind == "dbow")
    out.kind = ModelSpec::Kind::Dbow;
  else if (kind == "dbow-trained")
    out.kind = ModelSpec::Kind::DbowTrained;
  else if (kind == "vecs")
    out.kind = ModelSpec::Kind::Vecs;
  else
    throw ConfigError("unknown model kind '" + std::string(kind) + "'");
  return out;
}

std::vector<std::pair<std::string, ModelSpec>> parse_roster(std::string_view roster) {
  std::vector<std::pair<std::string, ModelSpec>> out;
  std::set<std::string, std::less<>> names;
  std::string_view rest = roster;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    auto item = rest.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      const auto eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0) throw ConfigError("roster entry '" + std::string(item) + "' is not name=spec");
      std::string name(item.substr(0, eq));
      if (name.find('\t') != std::string::npos) throw ConfigError("model name contains a tab");
      if (!names.insert(name).second) throw ConfigError("model '" + name + "' listed twice");
      out.emplace_back(std::move(name), parse_model_spec(item.substr(eq + 1)));
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

ModelEntry load_model(std::string name, const ModelSpec& spec, const RunConfig& config) {
  ModelEntry entry{name, nullptr, ModelFamily::Static};
  switch (spec.kind) {
    case ModelSpec::Kind::Hashing:
      entry.embedder = std::make_shared<HashingEmbedder>(spec.dim, spec.salt, name);
      break;
    case ModelSpec::Kind::W2v:
      entry.embedder =
          std::make_shared<W2vTfidfEmbedder>(name, std::make_shared<W2vTfidfModel>(load_w2v_tfidf(spec.path)));
      break;
    case ModelSpec::Kind::Dbow:
    case ModelSpec::Kind::DbowTrained: {
      DbowInference inference;
      inference.epochs = config.get_unsigned("dbow.infer_epochs");
      inference.negatives = config.get_unsigned("dbow.negatives");
      inference.lr_start = static_cast<float>(config.get_real("dbow.lr_start"));
      inference.lr_end = static_cast<float>(config.get_real("dbow.lr_end"));
      inference.unigram_power = config.get_real("dbow.unigram_power");
      inference.seed = config.stage_seed("infer");
      entry.embedder = std::make_shared<DbowEmbedder>(name, std::make_shared<DbowModel>(load_dbow(spec.path)),
                                                      inference, spec.kind == ModelSpec::Kind::DbowTrained);
      break;
    }
    case ModelSpec::Kind::Vecs:
      entry.embedder =
          std::make_shared<VecsEmbedder>(name, std::make_shared<ExternalVectors>(load_external_vectors(spec.path)));
      entry.family = ModelFamily::Contextual;
      break;
  }
  return entry;
}

Report build_report(const ScoreMatrix& true_scores, const ScoreMatrix& random_scores,
                    const std::vector<std::string>& subset, const RunConfig& config) {
  Report report;
  report.sections.push_back({"all models", win_rates(true_scores, random_scores)});
  if (!subset.empty())
    report.sections.push_back({"subset", subset_table(true_scores, random_scores, subset)});
  for (const auto* scores : {&true_scores, &random_scores})
    for (auto& s : summarize_scores(*scores)) report.distributions.push_back(std::move(s));
  report.seeds.emplace_back("master", config.get_unsigned("seed"));
  for (const auto stage : seeded_stages()) report.seeds.emplace_back(std::string(stage), config.stage_seed(stage));
  return report;
}

void cmd_ingest(const RunConfig& config, std::ostream& log_out) {
  config.validate();
  const auto& cpc_path = required(config, "ingest.cpc");
  const auto& app_path = required(config, "ingest.application");
  const auto& patent_path = required(config, "ingest.patent");
  const std::filesystem::path corpus_path = required(config, "corpus");
  const auto columns = config.ingest_columns();
  RunLog log(log_out, "ingest");
  log.seed_chain(config);

  CorpusBuilder builder;
  auto cpc = read_cpc_table(open_lines(cpc_path), columns.cpc);
  while (auto row = cpc.next()) builder.add_cpc(*row);
  builder.seal_cpc();
  auto apps = read_application_table(open_lines(app_path), columns.application);
  while (auto row = apps.next()) builder.add_application(*row);
  auto patents = read_patent_table(open_lines(patent_path), columns.patent, columns.utility_value);
  while (auto row = patents.next()) builder.add_patent(*row);
  const PatentCorpus corpus = builder.build();

  Provenance provenance = corpus.provenance();
  add_table(provenance, "cpc", cpc.counters());
  add_table(provenance, "application", apps.counters());
  add_table(provenance, "patent", patents.counters());
  log_table(log, "cpc", cpc.counters());
  log_table(log, "application", apps.counters());
  log_table(log, "patent", patents.counters());
  for (const auto& [k, v] : corpus.provenance().entries()) log.counter(k, v);

  write_file(corpus_path, [&](std::ostream& out) { write_corpus(out, corpus); });
  std::filesystem::path prov_path = config.get("ingest.provenance");
  if (prov_path.empty()) prov_path = corpus_path.string() + ".provenance";
  write_file(prov_path, [&](std::ostream& out) { out << provenance.render(); });
  log.record({{"corpus", corpus_path.string()}, {"records", std::to_string(corpus.size())}});
}

void cmd_triplets(const RunConfig& config, std::ostream& log_out) {
  config.validate();
  TripletLossConfig loss{config.get_real("triplet_loss.margin"),
                         static_cast<std::uint32_t>(config.get_unsigned("triplet_loss.batch_size")),
                         static_cast<std::uint32_t>(config.get_unsigned("triplet_loss.epochs")),
                         static_cast<std::uint32_t>(config.get_unsigned("triplet_loss.validation_every"))};
  loss.validate();
  const std::filesystem::path output = required(config, "triplets.output");
  const std::filesystem::path manifest = required(config, "triplets.manifest");
  const SplitFractions fractions{config.get_real("triplets.train_fraction"),
                                 config.get_real("triplets.validation_fraction")};
  const double sample_fraction = config.get_real("triplets.sample_fraction");
  const std::uint64_t seed = config.stage_seed("triplets");
  RunLog log(log_out, "triplets");
  log.seed_chain(config);

  const PatentCorpus corpus = load_corpus(config);
  const auto groups = group_corpus(corpus);
  PairStats stats;
  const auto pairs = enumerate_pairs(groups, corpus, &stats, config.workers());
  const auto triplets = attach_negatives(pairs, corpus, seed, config.workers());
  const auto split = sample_and_split(triplets, sample_fraction, fractions, seed);

  log.counter("patents", corpus.size());
  log.counter("groups", groups.size());
  std::uint64_t grouped = 0;
  for (const auto& [key, members] : groups) grouped += members.size();
  log.counter("grouped_patents", grouped);
  log.counter("combinations", stats.combinations);
  log.counter("continuations", stats.continuation_count);
  log.counter("pairs", stats.emitted);
  log.counter("triplets", triplets.size());
  log.counter("train", split.train.size());
  log.counter("validation", split.validation.size());

  write_file(output, [&](std::ostream& out) { write_triplets(out, triplets, seed); });
  write_split_manifest(manifest, split);
  auto trainer_path = manifest;
  trainer_path += ".trainer.json";
  write_file(trainer_path, [&](std::ostream& out) {
    nlohmann::ordered_json doc;
    // Relative to the manifest so the file does not depend on the output directory.
    const auto base = std::filesystem::absolute(trainer_path).parent_path();
    doc["triplets"] = std::filesystem::absolute(output).lexically_proximate(base).generic_string();
    doc["margin"] = loss.margin;
    doc["distance"] = "euclidean";
    doc["pooling"] = "mean";
    doc["batch_size"] = loss.batch_size;
    doc["epochs"] = loss.epochs;
    doc["validation_every"] = loss.validation_every;
    out << doc.dump(2) << '\n';
  });
}

void cmd_bench(const RunConfig& config, std::ostream& log_out) {
  config.validate();
  const auto& cases_path = required(config, "bench.cases");
  const auto claim_paths = config.get_list("bench.claims");
  if (claim_paths.empty()) throw ConfigError("bench.claims is not set");
  const auto reference_spec = parse_model_spec(required(config, "bench.reference"));
  const std::filesystem::path output = required(config, "bench.output");
  const YearWindow window{static_cast<int>(config.get_unsigned("bench.first_year")),
                          static_cast<int>(config.get_unsigned("bench.last_year"))};
  const std::uint64_t seed = config.stage_seed("bench");
  const auto claim_columns = config.columns("claims");
  const auto case_columns = config.columns("cases");
  const char delimiter = config.get_delimiter("bench.cases_delimiter");
  RunLog log(log_out, "bench");
  log.seed_chain(config);

  auto case_reader = read_case_table(open_lines(cases_path), case_columns, delimiter);
  const auto case_rows = case_reader.collect();
  log_table(log, "cases", case_reader.counters());
  const auto cases = group_case_rows(case_rows);

  std::vector<ClaimRecord> claims;
  Provenance tables;
  add_table(tables, "cases", case_reader.counters());
  for (std::size_t i = 0; i < claim_paths.size(); ++i) {
    auto reader = parse_claims(open_lines(claim_paths[i]), claim_columns);
    while (auto c = reader.next()) claims.push_back(std::move(*c));
    log_table(log, "claims:" + claim_paths[i], reader.counters());
    tables.add("table.claims.read", reader.counters().read);
    tables.add("table.claims.malformed", reader.counters().malformed);
  }
  const auto index = index_claims(claims);
  const auto reference = load_model("reference", reference_spec, config);

  BenchFunnel funnel;
  const auto bench = build_benchmark(cases, index, *reference.embedder, window, seed, &funnel, config.workers());
  const Provenance counts = funnel.provenance();
  for (const auto& [k, v] : counts.entries()) log.counter(k, v);
  Provenance provenance = counts;
  for (const auto& [k, v] : tables.entries()) provenance.set(k, v);
  log.counter("true_pairs", bench.true_pairs.size());
  log.counter("random_pairs", bench.random_pairs.size());

  write_file(output, [&](std::ostream& out) { write_benchmark(out, bench); });
  std::filesystem::path prov_path = config.get("bench.provenance");
  if (prov_path.empty()) prov_path = output.string() + ".provenance";
  write_file(prov_path, [&](std::ostream& out) { out << provenance.render(); });
}

namespace {

void log_training(RunLog& log, const TrainingLog& training) {
  for (std::size_t e = 0; e < training.epoch_mean_loss.size(); ++e)
    log.record({{"epoch", std::to_string(e + 1)}, {"mean_loss", format_real(training.epoch_mean_loss[e])}});
  log.counter("samples", training.samples);
  log.counter("skipped_documents", training.skipped_documents);
}

}  // namespace

void cmd_train_w2v(const RunConfig& config, std::ostream& log_out) {
  config.validate();
  SgnsConfig sgns;
  sgns.dim = config.get_unsigned("w2v.dim");
  sgns.window = config.get_unsigned("w2v.window");
  sgns.negatives = config.get_unsigned("w2v.negatives");
  sgns.epochs = config.get_unsigned("w2v.epochs");
  sgns.lr_start = static_cast<float>(config.get_real("w2v.lr_start"));
  sgns.lr_end = static_cast<float>(config.get_real("w2v.lr_end"));
  sgns.min_count = config.get_unsigned("w2v.min_count");
  sgns.unigram_power = config.get_real("w2v.unigram_power");
  sgns.seed = config.stage_seed("w2v");
  sgns.workers = config.training_workers();
  const auto variant = config.get("w2v.idf") == "rawlog" ? IdfVariant::RawLog : IdfVariant::Smoothed;
  const std::filesystem::path output = required(config, "w2v.output");
  RunLog log(log_out, "train-w2v");
  log.seed_chain(config);
  log.record({{"workers", std::to_string(sgns.workers)}});

  const PatentCorpus corpus = load_corpus(config);
  std::vector<std::string> texts;
  texts.reserve(corpus.size());
  for (const auto& [id, record] : corpus.records()) texts.push_back(record.abstract);
  TrainingLog training;
  const auto model = train_w2v_tfidf(texts, sgns, variant, &training);
  log.counter("vocabulary", model.vectors().vocab.size());
  log_training(log, training);
  save_w2v_tfidf(output, model);
}

void cmd_train_dbow(const RunConfig& config, std::ostream& log_out) {
  config.validate();
  DbowConfig dbow;
  dbow.dim = config.get_unsigned("dbow.dim");
  dbow.epochs = config.get_unsigned("dbow.epochs");
  dbow.negatives = config.get_unsigned("dbow.negatives");
  dbow.lr_start = static_cast<float>(config.get_real("dbow.lr_start"));
  dbow.lr_end = static_cast<float>(config.get_real("dbow.lr_end"));
  dbow.min_count = config.get_unsigned("dbow.min_count");
  dbow.unigram_power = config.get_real("dbow.unigram_power");
  dbow.seed = config.stage_seed("dbow");
  dbow.workers = config.training_workers();
  const std::filesystem::path output = required(config, "dbow.output");
  RunLog log(log_out, "train-dbow");
  log.seed_chain(config);
  log.record({{"workers", std::to_string(dbow.workers)}});

  const PatentCorpus corpus = load_corpus(config);
  std::vector<Document> docs;
  docs.reserve(corpus.size());
  for (const auto& [id, record] : corpus.records()) docs.push_back(Document{id, record.abstract});
  TrainingLog training;
  const auto model = train_dbow(docs, dbow, &training);
  log.counter("vocabulary", model.vocab().size());
  log.counter("documents", model.doc_ids().size());
  log_training(log, training);
  save_dbow(output, model);
}

namespace {

/// Documents to embed: corpus abstracts, benchmark claims, or an id/text table.
std::vector<Document> read_embed_input(const std::filesystem::path& path, RunLog& log) {
  std::string first;
  {
    auto probe = open_lines(path);
    probe->next_line(first);
  }
  std::vector<Document> docs;
  if (first.starts_with("PATSIM-CORPUS ")) {
    auto source = open_lines(path);
    const auto corpus = read_corpus(*source);
    for (const auto& [id, record] : corpus.records()) docs.push_back(Document{id, record.abstract});
    log.record({{"input", "corpus"}});
  } else if (first.starts_with("PATSIM-BENCH ")) {
    auto source = open_lines(path);
    const auto bench = read_benchmark(*source);
    std::set<std::string, std::less<>> seen;
    for (const auto* pairs : {&bench.true_pairs, &bench.random_pairs})
      for (const auto& p : *pairs)
        for (const auto* claim : {&p.claim_a, &p.claim_b})
          if (seen.insert(claim->key()).second) docs.push_back(Document{claim->key(), claim->text});
    log.record({{"input", "benchmark"}});
  } else {
    TableReader table(open_lines(path), ColumnMap{{"id", "id"}, {"text", "text"}});
    const auto id_col = table.role_index("id"), text_col = table.role_index("text");
    std::set<std::string, std::less<>> seen;
    while (auto row = table.next()) {
      if (!seen.insert((*row)[id_col]).second) throw FormatError("duplicate id '" + (*row)[id_col] + "'", row->line);
      docs.push_back(Document{(*row)[id_col], (*row)[text_col]});
    }
    log_table(log, "texts", table.counters());
  }
  return docs;
}

}  // namespace

void cmd_embed(const RunConfig& config, std::ostream& log_out) {
  config.validate();
  const auto& spec_text = required(config, "embed.model");
  const auto spec = parse_model_spec(spec_text);
  const std::filesystem::path input = required(config, "embed.input");
  const std::filesystem::path output = required(config, "embed.output");
  RunLog log(log_out, "embed");
  log.seed_chain(config);

  const auto model = load_model("embed", spec, config);
  const auto docs = read_embed_input(input, log);
  ExternalVectors vectors(spec_text, model.embedder->dim());
  std::uint64_t undefined = 0;
  for (const auto& doc : docs) {
    try {
      vectors.add(doc.id, model.embedder->embed(doc));
    } catch (const UndefinedEmbedding&) {
      ++undefined;
    }
  }
  log.counter("documents", docs.size());
  log.counter("embedded", vectors.size());
  log.counter("undefined", undefined);
  write_file(output, [&](std::ostream& out) { write_external_vectors(out, vectors); });
}

namespace {

void emit_report(const RunConfig& config, const Report& report, std::ostream& out) {
  const auto text = render_report(report, parse_report_format(config.get("eval.format")));
  const auto& target = config.get("eval.report");
  if (target.empty() || target == "-")
    out << text;
  else
    write_file(target, [&](std::ostream& file) { file << text; });
}

void log_tables(RunLog& log, const Report& report) {
  for (const auto& section : report.sections)
    log.record({{"section", '"' + section.label + '"'},
                {"max_denominator", std::to_string(section.table.max_denominator)},
                {"min_denominator", std::to_string(section.table.min_denominator)},
                {"max_ties", std::to_string(section.table.max_ties)},
                {"min_ties", std::to_string(section.table.min_ties)},
                {"excluded_true", std::to_string(section.table.excluded_true.size())},
                {"excluded_random", std::to_string(section.table.excluded_random.size())}});
}

}  // namespace

void cmd_eval(const RunConfig& config, std::ostream& log_out, std::ostream& out) {
  config.validate();
  const auto roster = parse_roster(required(config, "eval.models"));
  const auto subset = config.get_list("eval.subset");
  for (const auto& name : subset)
    if (std::none_of(roster.begin(), roster.end(), [&](const auto& r) { return r.first == name; }))
      throw ConfigError("eval.subset names unknown model '" + name + "'");
  const auto& bench_path = required(config, "eval.bench");
  RunLog log(log_out, "eval");
  log.seed_chain(config);

  auto source = open_lines(bench_path);
  const auto bench = read_benchmark(*source);
  std::vector<ModelEntry> models;
  for (const auto& [name, spec] : roster) models.push_back(load_model(name, spec, config));
  const auto [true_scores, random_scores] = score_all(models, bench, config.workers());
  log.counter("models", models.size());
  log.counter("true_pairs", true_scores.row_count());
  log.counter("random_pairs", random_scores.row_count());

  const auto& scores_path = config.get("eval.scores");
  if (!scores_path.empty())
    write_file(scores_path, [&](std::ostream& file) { write_scores(file, true_scores, random_scores); });
  const auto report = build_report(true_scores, random_scores, subset, config);
  log_tables(log, report);
  emit_report(config, report, out);
}

void cmd_report(const RunConfig& config, std::ostream& log_out, std::ostream& out) {
  config.validate();
  const auto& scores_path = required(config, "eval.scores");
  const auto subset = config.get_list("eval.subset");
  RunLog log(log_out, "report");
  log.seed_chain(config);

  auto source = open_lines(scores_path);
  const auto [true_scores, random_scores] = read_scores(*source);
  const auto report = build_report(true_scores, random_scores, subset, config);
  log_tables(log, report);
  emit_report(config, report, out);
}

}  // namespace patsim
