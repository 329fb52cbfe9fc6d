#pragma once

#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "narrclass/labels.hpp"

namespace narrclass::metrics {

using LabelStrings = std::set<std::string>;

// 2|P∩G| / (|P| + |G|); `both_empty` when both sets are empty.
double sample_f1(const LabelStrings& pred, const LabelStrings& gold, double both_empty = 1.0);

enum class CoarseMode { Samples, Macro };
enum class MacroUniverse { Observed, Taxonomy };

CoarseMode parse_coarse_mode(std::string_view name);
const char* to_string(CoarseMode mode);

struct ScoreOptions {
  CoarseMode coarse_mode = CoarseMode::Macro;
  double both_empty = 1.0;
  MacroUniverse universe = MacroUniverse::Observed;
  std::vector<std::string> taxonomy_coarse_labels;  // used with MacroUniverse::Taxonomy
};

struct DocumentScore {
  std::string id;
  double fine = 0.0;
  double coarse = 0.0;
};

struct LanguageScore {
  std::size_t documents = 0;
  double fine = 0.0;
  double coarse_samples = 0.0;
};

struct EvalReport {
  double f1_samples_fine = 0.0;
  double f1_samples_fine_std = 0.0;
  double f1_coarse = 0.0;
  double f1_coarse_std = 0.0;
  CoarseMode coarse_mode = CoarseMode::Macro;
  std::vector<DocumentScore> per_document;
  std::map<std::string, LanguageScore> by_language;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
  std::string to_table() const;
  std::string per_document_csv() const;
};

class ScoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using LabelMap = std::map<std::string, LabelSet>;

// Scores every gold id; a gold id without a prediction counts as an empty
// prediction (and is reported in warnings). A predicted id missing from gold
// is an error. `languages` maps ids to language tags for the breakdown.
EvalReport score(const LabelMap& predictions, const LabelMap& gold, const ScoreOptions& options = {},
                 const std::map<std::string, std::string>& languages = {});

// Per-document sample F1 over aligned label sets; the parallel kernel and its
// serial reference must agree bit-for-bit.
std::vector<double> per_document_f1(std::span<const LabelStrings> pred,
                                    std::span<const LabelStrings> gold, double both_empty);
std::vector<double> per_document_f1_serial(std::span<const LabelStrings> pred,
                                           std::span<const LabelStrings> gold, double both_empty);

// Mean over labels of per-label F1 = 2TP / (2TP + FP + FN), counted across documents.
double macro_f1(std::span<const LabelStrings> pred, std::span<const LabelStrings> gold,
                const LabelStrings& universe);

double mean(std::span<const double> values);
double population_std(std::span<const double> values);

}  // namespace narrclass::metrics
