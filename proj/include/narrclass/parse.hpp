#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "narrclass/taxonomy.hpp"

namespace narrclass::parse {

// One dropped or unknown token; the pipeline attaches the document id.
struct Warning {
  std::string step;  // "category", "main" or "sub"
  std::string token;
  std::string reason;
};

struct CategoryDecision {
  std::string name;  // a category name or "Other"
  bool other = false;
  std::optional<Warning> warning;
};

// Normalized exact match, then "exactly one category name occurs in the text",
// otherwise Other (with a warning unless the text itself was "Other").
CategoryDecision parse_category(std::string_view raw, const Taxonomy& taxonomy);

struct StepOutcome {
  Level level = Level::Main;
  std::vector<std::string> labels;  // resolved names, first occurrence order
  bool other = false;               // true iff no label survived
  std::vector<std::string> unknown; // tokens that matched nothing in scope
  std::vector<Warning> warnings;
};

// Splits on '#', resolves each token within scope (`parent` is the category at
// Level::Main, the main narrative at Level::Sub). Sentinel tokens next to valid
// labels are ignored.
StepOutcome parse_hash_list(std::string_view raw, Level level, const Taxonomy& taxonomy,
                            std::optional<std::string_view> parent);

}  // namespace narrclass::parse
