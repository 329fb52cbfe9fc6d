#include "narrclass/parse.hpp"

#include <algorithm>

#include "narrclass/labels.hpp"
#include "narrclass/text.hpp"

namespace narrclass::parse {
namespace {

const char* step_name(Level level) {
  switch (level) {
    case Level::Category: return "category";
    case Level::Main: return "main";
    case Level::Sub: return "sub";
  }
  return "?";
}

}  // namespace

CategoryDecision parse_category(std::string_view raw, const Taxonomy& taxonomy) {
  auto res = taxonomy.resolve(Level::Category, std::nullopt, raw);
  if (res.found()) return {res.name, false, std::nullopt};
  if (res.other()) return {std::string(kOther), true, std::nullopt};

  const std::string folded = text::fold_case(raw);
  const Category* hit = nullptr;
  int hits = 0;
  for (const auto& cat : taxonomy.categories()) {
    if (folded.find(text::fold_case(cat.name)) != std::string::npos) {
      hit = &cat;
      ++hits;
    }
  }
  if (hits == 1) return {hit->name, false, std::nullopt};
  return {std::string(kOther), true,
          Warning{"category", std::string(text::trim(raw)),
                  hits == 0 ? "no category name matched" : "ambiguous category"}};
}

StepOutcome parse_hash_list(std::string_view raw, Level level, const Taxonomy& taxonomy,
                            std::optional<std::string_view> parent) {
  StepOutcome out;
  out.level = level;
  for (auto token : text::split(raw, '#')) {
    auto trimmed = text::trim(token);
    if (trimmed.empty()) continue;
    auto res = taxonomy.resolve(level, parent, trimmed);
    if (res.found()) {
      if (std::find(out.labels.begin(), out.labels.end(), res.name) == out.labels.end()) {
        out.labels.push_back(res.name);
      }
    } else if (!res.other()) {
      out.unknown.emplace_back(trimmed);
      out.warnings.push_back({step_name(level), std::string(trimmed), "unknown label"});
    }
  }
  out.other = out.labels.empty();
  return out;
}

}  // namespace narrclass::parse
