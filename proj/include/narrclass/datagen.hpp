#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "narrclass/backend.hpp"
#include "narrclass/taxonomy.hpp"

namespace narrclass::datagen {

// Articles requested per generation call; fixed by the generation prompt.
inline constexpr int kArticlesPerCall = 5;

struct SubNarrativeEntry {
  std::string category;
  std::string main;
  std::string sub;
  std::string explanation;
};

std::vector<SubNarrativeEntry> entries(const Taxonomy& taxonomy);

struct SyntheticArticle {
  std::string category;
  std::string main;
  std::string sub;
  double temperature = 0.0;
  std::string text;
  std::size_t word_count = 0;
  std::string source_request_id;
};

struct DatagenOptions {
  int target_count = 100;
  double temperature_lo = 1.0;
  double temperature_hi = 1.5;
  std::uint64_t seed = 20250101;
  int request_cap = 0;  // 0: three times the minimum number of calls
  std::size_t min_words = 200;
  std::size_t max_words = 800;
  std::string model;
  int max_tokens = 4096;

  int effective_request_cap() const;
  void validate() const;
};

struct GenerationResult {
  SubNarrativeEntry entry;
  std::vector<SyntheticArticle> articles;
  int calls = 0;
  std::size_t rejected = 0;  // parsed bodies outside the word bounds
  bool reached_target = false;
  std::vector<std::string> warnings;
  std::optional<std::string> error;  // backend failure that stopped the run
};

// Uniform temperatures in [lo, hi] from a stream keyed by (seed, sub-narrative),
// so parallel scheduling cannot change the values.
class TemperatureStream {
 public:
  TemperatureStream(std::uint64_t seed, const SubNarrativeEntry& entry, double lo, double hi);
  double next();

 private:
  std::mt19937_64 rng_;
  double lo_;
  double hi_;
};

// Bodies following line-anchored "Article <n>:" markers (any case), trimmed,
// in document order. Text before the first marker is dropped.
std::vector<std::string> split_articles(std::string_view raw);

GenerationResult generate_for_subnarrative(const SubNarrativeEntry& entry, CompletionBackend& backend,
                                           const DatagenOptions& options);

// One GenerationResult per sub-narrative, in taxonomy order.
std::vector<GenerationResult> generate_all(const Taxonomy& taxonomy, CompletionBackend& backend,
                                           const DatagenOptions& options, int parallelism);

void write_articles(std::ostream& out, const std::vector<GenerationResult>& results);

std::string render_explanation_prompt(const std::vector<std::string>& main_narratives,
                                      const std::vector<std::string>& sub_narratives);
std::string render_explanation_prompt(const Taxonomy& taxonomy);

}  // namespace narrclass::datagen
