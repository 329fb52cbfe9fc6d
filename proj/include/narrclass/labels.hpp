#pragma once

#include <compare>
#include <set>
#include <string>
#include <string_view>

namespace narrclass {

// Reserved sentinel used at every taxonomy level when nothing applies.
inline constexpr std::string_view kOther = "Other";

struct LabelPair {
  std::string main;
  std::string sub;

  static LabelPair other() { return {std::string(kOther), std::string(kOther)}; }
  bool is_other() const { return main == kOther; }

  auto operator<=>(const LabelPair&) const = default;
};

using LabelSet = std::set<LabelPair>;

// Canonical textual forms shared by the prediction files, ensemble and scorer.
// Fine: "Main: Sub"; coarse: "Main"; the (Other, Other) pair renders as "Other".
std::string render_fine(const LabelPair& pair);
std::string render_coarse(const LabelPair& pair);

// Inverse of render_fine. Splits at the first ": "; a bare "Other" yields the
// sentinel pair. Throws std::invalid_argument on anything else.
LabelPair parse_fine(std::string_view text);

std::set<std::string> render_fine_set(const LabelSet& labels);
std::set<std::string> project_coarse(const LabelSet& labels);

}  // namespace narrclass
