#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "narrclass/dataset.hpp"
#include "narrclass/labels.hpp"
#include "narrclass/prediction_file.hpp"

namespace narrclass::ensemble {

using PredictionMap = std::map<std::string, LabelSet>;
using CoarseMap = std::map<std::string, std::set<std::string>>;

enum class Strategy { Union, Majority, Intersection };

Strategy parse_strategy(std::string_view name);
const char* to_string(Strategy s);

// Minimum number of models that must predict a label: 1, floor(k/2)+1, k.
int threshold(Strategy strategy, int k);

class EnsembleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Per document, keeps each pair predicted by at least threshold(strategy, k)
// models; an empty result becomes {(Other, Other)}. All inputs must share one
// id set.
PredictionMap aggregate(std::span<const PredictionMap> models, Strategy strategy);

// Same rule applied to coarse label sets directly; empty becomes {"Other"}.
CoarseMap aggregate_coarse(std::span<const CoarseMap> models, Strategy strategy);

enum class CoarseMode { Projection, Separate };

// File-level ensemble. Output rows follow the first file's order. Projection
// derives the coarse column from the aggregated pairs; Separate aggregates the
// coarse columns on their own.
std::vector<PredictionRow> aggregate_rows(const std::vector<std::vector<PredictionRow>>& files,
                                          Strategy strategy,
                                          CoarseMode coarse_mode = CoarseMode::Projection);

// Seeded Fisher-Yates shuffle, then round-robin into k disjoint subsets.
std::vector<std::vector<Document>> partition_dataset(const std::vector<Document>& docs, int k,
                                                     std::uint64_t seed);

// k samples of size n drawn with replacement.
std::vector<std::vector<Document>> bootstrap_subsets(const std::vector<Document>& docs, int k,
                                                     std::uint64_t seed);

}  // namespace narrclass::ensemble
