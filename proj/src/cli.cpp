#include "patsim/cli.hpp"

#include <ostream>

#include <CLI11.hpp>

#include "patsim/config.hpp"
#include "patsim/errors.hpp"
#include "patsim/pipeline.hpp"

namespace patsim {

namespace {

struct GlobalOptions {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> workers;
  std::optional<bool> deterministic;
  std::optional<std::string> format;
};

RunConfig resolve(const GlobalOptions& g) {
  RunConfig config = g.config_path.empty() ? RunConfig{} : RunConfig::load(g.config_path);
  for (const auto& kv : g.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    config.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (g.seed) config.set("seed", std::to_string(*g.seed));
  if (g.workers) config.set("workers", std::to_string(*g.workers));
  if (g.deterministic) config.set("deterministic", *g.deterministic ? "true" : "false");
  if (g.format) config.set("eval.format", *g.format);
  return config;
}

const char* error_kind(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return "config";
  if (dynamic_cast<const IoError*>(&e)) return "io";
  if (dynamic_cast<const FormatError*>(&e)) return "format";
  if (dynamic_cast<const SchemaError*>(&e)) return "schema";
  if (dynamic_cast<const IngestConflict*>(&e)) return "conflict";
  if (dynamic_cast<const ParameterError*>(&e)) return "parameter";
  if (dynamic_cast<const Error*>(&e)) return "pipeline";
  return "internal";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"patent similarity pipeline", "patsim"};
  app.require_subcommand(1, 1);
  GlobalOptions g;
  std::string print_config;

  auto add_globals = [&](CLI::App* sub) {
    sub->add_option("--config", g.config_path, "key = value run configuration")->check(CLI::ExistingFile);
    sub->add_option("--set", g.overrides, "override one config key (key=value), repeatable");
    sub->add_option("--seed", g.seed, "master seed");
    sub->add_option("--workers", g.workers, "worker threads");
    sub->add_flag("--deterministic,!--no-deterministic", g.deterministic, "single-worker training");
    sub->add_option("--format", g.format, "report format: text, csv or json");
  };

  struct Command {
    const char* name;
    const char* help;
    std::function<void(const RunConfig&)> run;
  };
  const std::vector<Command> commands = {
      {"ingest", "build the cleaned corpus from the three source tables",
       [&](const RunConfig& c) { cmd_ingest(c, err); }},
      {"triplets", "enumerate pairs, attach negatives, sample and split",
       [&](const RunConfig& c) { cmd_triplets(c, err); }},
      {"bench", "build the interference claim-pair benchmark", [&](const RunConfig& c) { cmd_bench(c, err); }},
      {"train-w2v", "train the word2vec TF-IDF model", [&](const RunConfig& c) { cmd_train_w2v(c, err); }},
      {"train-dbow", "train the PV-DBOW model", [&](const RunConfig& c) { cmd_train_dbow(c, err); }},
      {"embed", "write PATSIM-VECS vectors for a corpus, benchmark or id/text table",
       [&](const RunConfig& c) { cmd_embed(c, err); }},
      {"eval", "score the benchmark under every model and render the win-rate tables",
       [&](const RunConfig& c) { cmd_eval(c, err, out); }},
      {"report", "render the win-rate tables from a scores file",
       [&](const RunConfig& c) { cmd_report(c, err, out); }},
      {"config", "print the resolved configuration", [&](const RunConfig& c) { c.write(out); }},
  };
  for (const auto& cmd : commands) add_globals(app.add_subcommand(cmd.name, cmd.help));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  const auto* chosen = app.get_subcommands().front();
  const std::string stage = chosen->get_name();
  try {
    const RunConfig config = resolve(g);
    for (const auto& cmd : commands)
      if (stage == cmd.name) cmd.run(config);
  } catch (const std::exception& e) {
    err << "stage=" << stage << " error=" << error_kind(e) << " message=\"" << e.what() << "\"\n";
    return 1;
  }
  return 0;
}

}  // namespace patsim
