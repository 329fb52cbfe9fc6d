#include "narrclass/ensemble.hpp"

#include <numeric>
#include <random>

namespace narrclass::ensemble {
namespace {

// Unbiased draw from [0, bound) by rejection.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    auto v = rng();
    if (v < limit) return v % bound;
  }
}

template <typename Map>
void check_inputs(std::span<const Map> models) {
  if (models.empty()) throw EnsembleError("ensemble needs at least one model");
  const auto& ref = models.front();
  for (std::size_t m = 1; m < models.size(); ++m) {
    std::vector<std::string> bad;
    for (const auto& [id, _] : models[m]) {
      if (!ref.contains(id)) bad.push_back(id);
    }
    for (const auto& [id, _] : ref) {
      if (!models[m].contains(id)) bad.push_back(id);
    }
    if (!bad.empty()) {
      std::string msg = "model " + std::to_string(m) + " id set differs from model 0:";
      for (const auto& id : bad) msg += " " + id;
      throw EnsembleError(msg);
    }
  }
}

template <typename Map, typename Label>
Map aggregate_impl(std::span<const Map> models, Strategy strategy, const Label& empty_label) {
  check_inputs(models);
  const int k = static_cast<int>(models.size());
  const int need = threshold(strategy, k);
  Map out;
  for (const auto& [id, _] : models.front()) {
    std::map<Label, int> counts;
    for (const auto& model : models) {
      for (const auto& label : model.at(id)) ++counts[label];
    }
    auto& kept = out[id];
    for (const auto& [label, n] : counts) {
      if (n >= need) kept.insert(label);
    }
    if (kept.empty()) kept.insert(empty_label);
  }
  return out;
}

void check_k(std::size_t n, int k) {
  if (k < 1) throw EnsembleError("k must be >= 1");
  if (static_cast<std::size_t>(k) > n) {
    throw EnsembleError("k = " + std::to_string(k) + " exceeds dataset size " + std::to_string(n));
  }
}

}  // namespace

Strategy parse_strategy(std::string_view name) {
  if (name == "union") return Strategy::Union;
  if (name == "majority") return Strategy::Majority;
  if (name == "intersection") return Strategy::Intersection;
  throw std::invalid_argument("unknown ensemble strategy '" + std::string(name) + "'");
}

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::Union: return "union";
    case Strategy::Majority: return "majority";
    case Strategy::Intersection: return "intersection";
  }
  return "?";
}

int threshold(Strategy strategy, int k) {
  switch (strategy) {
    case Strategy::Union: return 1;
    case Strategy::Majority: return k / 2 + 1;
    case Strategy::Intersection: return k;
  }
  return k;
}

PredictionMap aggregate(std::span<const PredictionMap> models, Strategy strategy) {
  return aggregate_impl(models, strategy, LabelPair::other());
}

CoarseMap aggregate_coarse(std::span<const CoarseMap> models, Strategy strategy) {
  return aggregate_impl(models, strategy, std::string(kOther));
}

std::vector<PredictionRow> aggregate_rows(const std::vector<std::vector<PredictionRow>>& files,
                                          Strategy strategy, CoarseMode coarse_mode) {
  std::vector<PredictionMap> fine(files.size());
  std::vector<CoarseMap> coarse(files.size());
  for (std::size_t m = 0; m < files.size(); ++m) {
    for (const auto& row : files[m]) {
      fine[m][row.id] = row.fine;
      coarse[m][row.id] = row.coarse;
    }
  }
  auto fine_agg = aggregate(fine, strategy);
  CoarseMap coarse_agg;
  if (coarse_mode == CoarseMode::Separate) coarse_agg = aggregate_coarse(coarse, strategy);

  std::vector<PredictionRow> out;
  out.reserve(files.front().size());
  for (const auto& row : files.front()) {
    auto next = make_row(row.id, fine_agg.at(row.id));
    if (coarse_mode == CoarseMode::Separate) next.coarse = coarse_agg.at(row.id);
    out.push_back(std::move(next));
  }
  return out;
}

std::vector<std::vector<Document>> partition_dataset(const std::vector<Document>& docs, int k,
                                                     std::uint64_t seed) {
  check_k(docs.size(), k);
  std::vector<std::size_t> order(docs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[bounded(rng, i)]);
  }
  std::vector<std::vector<Document>> parts(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < order.size(); ++i) {
    parts[i % parts.size()].push_back(docs[order[i]]);
  }
  return parts;
}

std::vector<std::vector<Document>> bootstrap_subsets(const std::vector<Document>& docs, int k,
                                                     std::uint64_t seed) {
  check_k(docs.size(), k);
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Document>> parts(static_cast<std::size_t>(k));
  for (auto& part : parts) {
    for (std::size_t i = 0; i < docs.size(); ++i) part.push_back(docs[bounded(rng, docs.size())]);
  }
  return parts;
}

}  // namespace narrclass::ensemble
