#include "narrclass/cli.hpp"

#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <system_error>

#include <CLI11.hpp>

#include "narrclass/datagen.hpp"
#include "narrclass/dataset.hpp"
#include "narrclass/ensemble.hpp"
#include "narrclass/http_backend.hpp"
#include "narrclass/metrics.hpp"
#include "narrclass/mock_backend.hpp"
#include "narrclass/pipeline.hpp"
#include "narrclass/prediction_file.hpp"
#include "narrclass/taxonomy.hpp"

namespace narrclass::cli {
namespace fs = std::filesystem;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ClassifyArgs {
  std::string taxonomy, dataset, output, trace, log, failures;
};

struct EnsembleArgs {
  std::vector<std::string> inputs;
  std::string strategy = "union";
  std::string coarse = "projection";
  std::string output;
};

struct ScoreArgs {
  std::string predictions, gold, taxonomy, json, table, per_document;
  std::string coarse_mode = "macro";
  std::string universe = "observed";
  double both_empty = 1.0;
};

struct DatagenArgs {
  std::string taxonomy, output;
  datagen::DatagenOptions options;
  bool explain_prompt = false;
};

struct PartitionArgs {
  std::string dataset, output_prefix;
  int k = 3;
  std::uint64_t seed = kDefaultSeed;
  bool bootstrap = false;
};

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw ConfigError(std::string(what) + " path is required");
  if (!fs::is_regular_file(path)) throw ConfigError(std::string(what) + " not found: " + path);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::system_error(errno, std::generic_category(), "cannot write " + path);
  return out;
}

void add_backend_options(CLI::App* cmd, BackendSettings& s) {
  cmd->add_option("--backend", s.kind, "Completion backend")->check(CLI::IsMember({"http", "mock"}));
  cmd->add_option("--mock-script", s.mock_script, "JSON script for the mock backend");
  cmd->add_option("--endpoint", s.endpoint, "Chat-completions base URL (default $NARRCLASS_ENDPOINT)");
  cmd->add_option("--model", s.model, "Model identifier");
  cmd->add_option("--api-key-env", s.api_key_env, "Environment variable holding the API key");
  cmd->add_option("--system-message", s.system_message, "Optional system message");
  cmd->add_option("--parallelism", s.parallelism, "Concurrent requests")->check(CLI::PositiveNumber);
  cmd->add_option("--retries", s.retries, "Attempts per request")->check(CLI::PositiveNumber);
  cmd->add_option("--retry-base-ms", s.retry_base_ms, "Backoff base delay in milliseconds");
  cmd->add_option("--timeout", s.timeout_s, "Request timeout in seconds")->check(CLI::PositiveNumber);
  cmd->add_option("--temperature", s.temperature, "Sampling temperature")->check(CLI::Range(0.0, 2.0));
  cmd->add_option("--max-tokens", s.max_tokens, "Completion token limit")->check(CLI::PositiveNumber);
}

std::map<std::string, LabelSet> gold_from_documents(const std::vector<Document>& docs,
                                                    std::map<std::string, std::string>& languages) {
  std::map<std::string, LabelSet> gold;
  for (const auto& d : docs) {
    if (!d.gold) continue;
    gold[d.id] = LabelSet(d.gold->begin(), d.gold->end());
    languages[d.id] = d.language;
  }
  return gold;
}

int do_classify(const ClassifyArgs& a, const BackendSettings& b, std::ostream& out, std::ostream& err) {
  require_file(a.taxonomy, "taxonomy");
  require_file(a.dataset, "dataset");
  if (a.output.empty()) throw ConfigError("--output is required");
  auto backend = make_backend(b);
  auto taxonomy = load_taxonomy(a.taxonomy);
  auto docs = load_documents(a.dataset);

  PipelineOptions opts{b.model, b.temperature, b.max_tokens};
  auto run = classify_dataset(docs, taxonomy, *backend, opts, b.parallelism);

  std::vector<PredictionRow> rows;
  for (const auto& r : run.results) rows.push_back(make_row(r.document_id, r.labels));
  save_predictions(a.output, rows);
  if (!a.trace.empty()) {
    auto f = open_out(a.trace);
    write_trace(f, run);
  }
  if (!a.log.empty()) {
    auto f = open_out(a.log);
    write_run_log(f, run);
  }
  out << "classified " << run.results.size() << " of " << docs.size() << " documents\n";
  if (run.failures.empty()) return kOk;

  const std::string manifest = a.failures.empty() ? a.output + ".failures.jsonl" : a.failures;
  {
    auto f = open_out(manifest);
    write_failure_manifest(f, run);
  }
  err << run.failures.size() << " document(s) failed; manifest: " << manifest << '\n';
  return run.results.empty() && !docs.empty() ? kBackendError : kPartialFailure;
}

int do_ensemble(const EnsembleArgs& a, std::ostream& out) {
  if (a.inputs.size() < 2) throw ConfigError("ensemble needs at least two prediction files");
  for (const auto& p : a.inputs) require_file(p, "prediction file");
  if (a.output.empty()) throw ConfigError("--output is required");
  std::vector<std::vector<PredictionRow>> files;
  for (const auto& p : a.inputs) files.push_back(load_predictions(p));
  auto mode = a.coarse == "separate" ? ensemble::CoarseMode::Separate : ensemble::CoarseMode::Projection;
  auto rows = ensemble::aggregate_rows(files, ensemble::parse_strategy(a.strategy), mode);
  save_predictions(a.output, rows);
  out << "wrote " << rows.size() << " rows (" << a.strategy << ", k=" << files.size() << ")\n";
  return kOk;
}

int do_score(const ScoreArgs& a, std::ostream& out, std::ostream& err) {
  require_file(a.predictions, "predictions");
  require_file(a.gold, "gold");
  metrics::ScoreOptions opts;
  opts.coarse_mode = metrics::parse_coarse_mode(a.coarse_mode);
  opts.both_empty = a.both_empty;
  if (a.universe == "taxonomy") {
    require_file(a.taxonomy, "taxonomy");
    opts.universe = metrics::MacroUniverse::Taxonomy;
    auto tax = load_taxonomy(a.taxonomy);
    opts.taxonomy_coarse_labels.emplace_back(kOther);
    for (const auto& cat : tax.categories()) {
      for (const auto& main : cat.narratives) opts.taxonomy_coarse_labels.push_back(main.name);
    }
  }

  std::map<std::string, LabelSet> predictions;
  for (const auto& row : load_predictions(a.predictions)) predictions[row.id] = row.fine;

  std::map<std::string, LabelSet> gold;
  std::map<std::string, std::string> languages;
  if (fs::path(a.gold).extension() == ".tsv") {
    for (const auto& row : load_predictions(a.gold)) gold[row.id] = row.fine;
  } else {
    gold = gold_from_documents(load_documents(a.gold), languages);
  }

  auto report = metrics::score(predictions, gold, opts, languages);
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  if (!a.json.empty()) {
    auto f = open_out(a.json);
    f << report.to_json().dump(2) << '\n';
  }
  if (!a.per_document.empty()) {
    auto f = open_out(a.per_document);
    f << report.per_document_csv();
  }
  if (!a.table.empty()) {
    auto f = open_out(a.table);
    f << report.to_table();
  } else {
    out << report.to_table();
  }
  return kOk;
}

int do_datagen(DatagenArgs& a, BackendSettings b, std::ostream& out, std::ostream& err) {
  require_file(a.taxonomy, "taxonomy");
  auto taxonomy = load_taxonomy(a.taxonomy);
  if (a.explain_prompt) {
    out << datagen::render_explanation_prompt(taxonomy) << '\n';
    return kOk;
  }
  if (a.output.empty()) throw ConfigError("--output is required");
  a.options.model = b.model;
  a.options.max_tokens = b.max_tokens;
  try {
    a.options.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  auto backend = make_backend(b);
  auto results = datagen::generate_all(taxonomy, *backend, a.options, b.parallelism);
  {
    auto f = open_out(a.output);
    datagen::write_articles(f, results);
  }
  std::size_t total = 0, calls = 0, rejected = 0, failed = 0;
  for (const auto& r : results) {
    total += r.articles.size();
    calls += static_cast<std::size_t>(r.calls);
    rejected += r.rejected;
    for (const auto& w : r.warnings) err << "warning: " << w << '\n';
    if (r.error) {
      ++failed;
      err << "error: " << r.entry.sub << ": " << *r.error << '\n';
    }
  }
  out << "generated " << total << " articles for " << results.size() << " sub-narratives in "
      << calls << " calls (" << rejected << " rejected by word bounds)\n";
  if (failed == 0) return kOk;
  return failed == results.size() ? kBackendError : kPartialFailure;
}

int do_validate(const std::string& path, std::ostream& out) {
  if (!fs::exists(path)) {
    throw std::system_error(std::make_error_code(std::errc::no_such_file_or_directory),
                            "cannot open " + path);
  }
  try {
    auto tax = load_taxonomy(path);
    out << "OK categories=" << tax.categories().size() << " mains=" << tax.main_count()
        << " subs=" << tax.sub_count() << '\n';
    return kOk;
  } catch (const TaxonomyValidationError& e) {
    out << "FAIL " << e.what() << '\n';
    return kIoError;
  } catch (const TaxonomyParseError& e) {
    out << "FAIL " << e.what() << '\n';
    return kIoError;
  }
}

int do_partition(const PartitionArgs& a, std::ostream& out) {
  require_file(a.dataset, "dataset");
  if (a.output_prefix.empty()) throw ConfigError("--output-prefix is required");
  auto docs = load_documents(a.dataset);
  std::vector<std::vector<Document>> parts;
  try {
    parts = a.bootstrap ? ensemble::bootstrap_subsets(docs, a.k, a.seed)
                        : ensemble::partition_dataset(docs, a.k, a.seed);
  } catch (const ensemble::EnsembleError& e) {
    throw ConfigError(e.what());
  }
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto path = a.output_prefix + "." + std::to_string(i) + ".jsonl";
    auto f = open_out(path);
    write_documents(f, parts[i]);
    out << path << ": " << parts[i].size() << " documents\n";
  }
  return kOk;
}

}  // namespace

std::unique_ptr<CompletionBackend> make_backend(const BackendSettings& s) {
  if (s.kind == "mock") {
    if (s.mock_script.empty()) return std::make_unique<MockBackend>(MockScript{});
    require_file(s.mock_script, "mock script");
    return std::make_unique<MockBackend>(MockScript::load(s.mock_script));
  }
  HttpBackendConfig cfg;
  if (!s.endpoint.empty()) {
    cfg.endpoint = s.endpoint;
  } else if (const char* env = std::getenv("NARRCLASS_ENDPOINT"); env && *env) {
    cfg.endpoint = env;
  }
  if (const char* key = std::getenv(s.api_key_env.c_str()); key) cfg.api_key = key;
  cfg.system_message = s.system_message;
  cfg.retry.max_attempts = s.retries;
  cfg.retry.base_delay = std::chrono::milliseconds(s.retry_base_ms);
  cfg.timeout = std::chrono::seconds(s.timeout_s);
  try {
    return std::make_unique<HttpBackend>(cfg);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hierarchical narrative classification toolkit", "narrclass"};
  app.set_config("--config", "", "TOML config file; command-line flags take precedence");
  app.require_subcommand(1);

  BackendSettings backend;

  ClassifyArgs classify;
  auto* c_classify = app.add_subcommand("classify", "Classify a JSONL dataset into a prediction TSV");
  c_classify->add_option("--taxonomy", classify.taxonomy, "Taxonomy JSON");
  c_classify->add_option("--dataset", classify.dataset, "Input documents (JSONL)");
  c_classify->add_option("--output", classify.output, "Prediction TSV to write");
  c_classify->add_option("--trace", classify.trace, "Write per-step prompt hashes and responses (JSONL)");
  c_classify->add_option("--log", classify.log, "Write parse warnings (JSONL)");
  c_classify->add_option("--failures", classify.failures, "Failure manifest path");
  add_backend_options(c_classify, backend);

  EnsembleArgs ens;
  auto* c_ensemble = app.add_subcommand("ensemble", "Aggregate prediction files");
  c_ensemble->add_option("--inputs", ens.inputs, "Prediction TSV files")->expected(1, -1);
  c_ensemble->add_option("--strategy", ens.strategy)
      ->check(CLI::IsMember({"union", "majority", "intersection"}));
  c_ensemble->add_option("--coarse", ens.coarse, "Coarse column derivation")
      ->check(CLI::IsMember({"projection", "separate"}));
  c_ensemble->add_option("--output", ens.output, "Prediction TSV to write");

  ScoreArgs score;
  auto* c_score = app.add_subcommand("score", "Score predictions against gold labels");
  c_score->add_option("--predictions", score.predictions, "Prediction TSV");
  c_score->add_option("--gold", score.gold, "Gold labels: JSONL dataset or prediction-format .tsv");
  c_score->add_option("--coarse-mode", score.coarse_mode)->check(CLI::IsMember({"macro", "samples"}));
  c_score->add_option("--both-empty", score.both_empty, "F1 when prediction and gold are both empty")
      ->check(CLI::Range(0.0, 1.0));
  c_score->add_option("--universe", score.universe, "Macro label universe")
      ->check(CLI::IsMember({"observed", "taxonomy"}));
  c_score->add_option("--taxonomy", score.taxonomy, "Taxonomy JSON (for --universe taxonomy)");
  c_score->add_option("--json", score.json, "Write the JSON report here");
  c_score->add_option("--table", score.table, "Write the table here instead of stdout");
  c_score->add_option("--per-document", score.per_document, "Write per-document scores (CSV)");

  DatagenArgs gen;
  gen.options.seed = kDefaultSeed;
  auto* c_datagen = app.add_subcommand("datagen", "Generate synthetic articles per sub-narrative");
  c_datagen->add_option("--taxonomy", gen.taxonomy, "Taxonomy JSON");
  c_datagen->add_option("--output", gen.output, "Articles JSONL to write");
  c_datagen->add_option("--target", gen.options.target_count, "Accepted articles per sub-narrative");
  c_datagen->add_option("--temp-lo", gen.options.temperature_lo);
  c_datagen->add_option("--temp-hi", gen.options.temperature_hi);
  c_datagen->add_option("--seed", gen.options.seed);
  c_datagen->add_option("--request-cap", gen.options.request_cap, "Calls per sub-narrative (0: auto)");
  c_datagen->add_option("--min-words", gen.options.min_words);
  c_datagen->add_option("--max-words", gen.options.max_words);
  c_datagen->add_flag("--explain-prompt", gen.explain_prompt,
                      "Print the explanation-generation prompt for the taxonomy and exit");
  BackendSettings gen_backend;
  gen_backend.max_tokens = 4096;
  add_backend_options(c_datagen, gen_backend);

  std::string validate_path;
  auto* c_validate = app.add_subcommand("validate-taxonomy", "Load and validate a taxonomy file");
  c_validate->add_option("path", validate_path, "Taxonomy JSON")->required();

  PartitionArgs part;
  auto* c_partition = app.add_subcommand("partition", "Split a dataset into k disjoint subsets");
  c_partition->add_option("--dataset", part.dataset, "Input documents (JSONL)");
  c_partition->add_option("--k", part.k)->check(CLI::PositiveNumber);
  c_partition->add_option("--seed", part.seed);
  c_partition->add_option("--output-prefix", part.output_prefix, "Writes <prefix>.<i>.jsonl");
  c_partition->add_flag("--bootstrap", part.bootstrap, "Sample with replacement instead");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kConfigError;
  }

  try {
    if (*c_classify) return do_classify(classify, backend, out, err);
    if (*c_ensemble) return do_ensemble(ens, out);
    if (*c_score) return do_score(score, out, err);
    if (*c_datagen) return do_datagen(gen, gen_backend, out, err);
    if (*c_validate) return do_validate(validate_path, out);
    if (*c_partition) return do_partition(part, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const BackendError& e) {
    err << "backend error: " << e.what() << '\n';
    return kBackendError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kConfigError;
}

}  // namespace narrclass::cli
