#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "narrclass/backend.hpp"
#include "narrclass/dataset.hpp"
#include "narrclass/labels.hpp"
#include "narrclass/parse.hpp"
#include "narrclass/taxonomy.hpp"

namespace narrclass {

struct PipelineOptions {
  std::string model;
  double temperature = 0.0;
  int max_tokens = 256;
};

struct TraceEntry {
  std::string step;         // "step1", "step2" or "step3:<main narrative>"
  std::string prompt_hash;  // hex FNV-1a of the rendered prompt
  std::string response;
};

struct PipelineResult {
  std::string document_id;
  std::string category;  // category name or "Other"
  LabelSet labels;
  std::vector<TraceEntry> trace;
  std::vector<parse::Warning> warnings;
};

struct DocumentFailure {
  std::string document_id;
  BackendErrorKind kind;
  std::string message;
};

struct DatasetRun {
  std::vector<PipelineResult> results;  // successes, in input order
  std::vector<DocumentFailure> failures;
};

// Category, then main narratives, then one sub-narrative call per main
// narrative. Backend errors propagate as BackendError.
PipelineResult classify_document(const Document& doc, const Taxonomy& taxonomy,
                                 CompletionBackend& backend, const PipelineOptions& options = {});

// Documents are classified concurrently, up to `parallelism` at a time.
DatasetRun classify_dataset(const std::vector<Document>& docs, const Taxonomy& taxonomy,
                            CompletionBackend& backend, const PipelineOptions& options,
                            int parallelism);

// Sequential reference for classify_dataset.
DatasetRun classify_dataset_serial(const std::vector<Document>& docs, const Taxonomy& taxonomy,
                                   CompletionBackend& backend, const PipelineOptions& options);

// JSON-lines writers: one record per warning / per trace entry / per failure.
void write_run_log(std::ostream& out, const DatasetRun& run);
void write_trace(std::ostream& out, const DatasetRun& run);
void write_failure_manifest(std::ostream& out, const DatasetRun& run);

}  // namespace narrclass
