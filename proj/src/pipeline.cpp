#include "narrclass/pipeline.hpp"

#include <ostream>

#include <nlohmann/json.hpp>

#include "narrclass/prompt.hpp"
#include "narrclass/text.hpp"

namespace narrclass {
namespace {

std::string call(CompletionBackend& backend, const PipelineOptions& options, std::string prompt,
                 std::string step, PipelineResult& result) {
  CompletionRequest req{std::move(prompt), options.temperature, options.max_tokens, options.model};
  auto hash = text::hex64(text::fnv1a64(req.prompt));
  auto response = backend.complete(req);
  result.trace.push_back({std::move(step), std::move(hash), response.text});
  return response.text;
}

PipelineResult sentinel(PipelineResult result) {
  result.category = result.category.empty() ? std::string(kOther) : result.category;
  result.labels = {LabelPair::other()};
  return result;
}

void classify_into(DatasetRun& run, std::vector<std::optional<PipelineResult>>& slots,
                   std::vector<std::optional<DocumentFailure>>& failed) {
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i]) run.results.push_back(std::move(*slots[i]));
    if (failed[i]) run.failures.push_back(std::move(*failed[i]));
  }
}

void classify_one(const Document& doc, const Taxonomy& taxonomy, CompletionBackend& backend,
                  const PipelineOptions& options, std::optional<PipelineResult>& slot,
                  std::optional<DocumentFailure>& failure) {
  try {
    slot = classify_document(doc, taxonomy, backend, options);
  } catch (const BackendError& e) {
    failure = DocumentFailure{doc.id, e.kind(), e.what()};
  } catch (const std::exception& e) {
    failure = DocumentFailure{doc.id, BackendErrorKind::Invalid, e.what()};
  }
}

}  // namespace

PipelineResult classify_document(const Document& doc, const Taxonomy& taxonomy,
                                 CompletionBackend& backend, const PipelineOptions& options) {
  PipelineResult result;
  result.document_id = doc.id;

  auto raw_category = call(backend, options, prompt::render_step1(doc.text), "step1", result);
  auto category = parse::parse_category(raw_category, taxonomy);
  if (category.warning) result.warnings.push_back(*category.warning);
  if (category.other) return sentinel(std::move(result));
  result.category = category.name;

  const Category& cat = *taxonomy.find_category(category.name);
  std::vector<prompt::NamedExplanation> narratives;
  for (const auto& main : cat.narratives) narratives.emplace_back(main.name, main.explanation);

  auto raw_mains = call(backend, options, prompt::render_step2(cat.name, narratives, doc.text),
                        "step2", result);
  auto mains = parse::parse_hash_list(raw_mains, Level::Main, taxonomy, cat.name);
  result.warnings.insert(result.warnings.end(), mains.warnings.begin(), mains.warnings.end());
  if (mains.other) return sentinel(std::move(result));

  for (const auto& main_name : mains.labels) {
    const MainNarrative& main = *taxonomy.find_main(main_name, cat.name);
    std::vector<prompt::NamedExplanation> subs;
    for (const auto& sub : main.subnarratives) subs.emplace_back(sub.name, sub.explanation);

    auto raw_subs = call(backend, options, prompt::render_step3(cat.name, main.name, subs, doc.text),
                         "step3:" + main.name, result);
    auto outcome = parse::parse_hash_list(raw_subs, Level::Sub, taxonomy, main.name);
    result.warnings.insert(result.warnings.end(), outcome.warnings.begin(), outcome.warnings.end());

    for (const auto& sub : outcome.labels) result.labels.insert({main.name, sub});
    if (outcome.other || !outcome.unknown.empty()) {
      result.labels.insert({main.name, std::string(kOther)});
    }
  }
  return result;
}

DatasetRun classify_dataset(const std::vector<Document>& docs, const Taxonomy& taxonomy,
                            CompletionBackend& backend, const PipelineOptions& options,
                            int parallelism) {
  if (parallelism < 1) throw std::invalid_argument("parallelism must be >= 1");
  std::vector<std::optional<PipelineResult>> slots(docs.size());
  std::vector<std::optional<DocumentFailure>> failed(docs.size());
  const auto n = static_cast<long>(docs.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(parallelism) if (parallelism > 1)
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    classify_one(docs[k], taxonomy, backend, options, slots[k], failed[k]);
  }

  DatasetRun run;
  classify_into(run, slots, failed);
  return run;
}

DatasetRun classify_dataset_serial(const std::vector<Document>& docs, const Taxonomy& taxonomy,
                                   CompletionBackend& backend, const PipelineOptions& options) {
  std::vector<std::optional<PipelineResult>> slots(docs.size());
  std::vector<std::optional<DocumentFailure>> failed(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    classify_one(docs[i], taxonomy, backend, options, slots[i], failed[i]);
  }
  DatasetRun run;
  classify_into(run, slots, failed);
  return run;
}

void write_run_log(std::ostream& out, const DatasetRun& run) {
  for (const auto& r : run.results) {
    for (const auto& w : r.warnings) {
      out << nlohmann::json{{"document_id", r.document_id},
                            {"step", w.step},
                            {"token", w.token},
                            {"reason", w.reason}}
                 .dump()
          << '\n';
    }
  }
}

void write_trace(std::ostream& out, const DatasetRun& run) {
  for (const auto& r : run.results) {
    for (const auto& t : r.trace) {
      out << nlohmann::json{{"document_id", r.document_id},
                            {"step", t.step},
                            {"prompt_hash", t.prompt_hash},
                            {"response", t.response}}
                 .dump()
          << '\n';
    }
  }
}

void write_failure_manifest(std::ostream& out, const DatasetRun& run) {
  for (const auto& f : run.failures) {
    out << nlohmann::json{{"document_id", f.document_id},
                          {"kind", to_string(f.kind)},
                          {"message", f.message}}
               .dump()
        << '\n';
  }
}

}  // namespace narrclass
