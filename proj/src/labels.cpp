#include "narrclass/labels.hpp"

#include <stdexcept>

namespace narrclass {

std::string render_fine(const LabelPair& pair) {
  if (pair.is_other()) return std::string(kOther);
  return pair.main + ": " + pair.sub;
}

std::string render_coarse(const LabelPair& pair) { return pair.main; }

LabelPair parse_fine(std::string_view text) {
  if (text == kOther) return LabelPair::other();
  auto pos = text.find(": ");
  if (pos == std::string_view::npos || pos == 0 || pos + 2 >= text.size()) {
    throw std::invalid_argument("malformed fine label '" + std::string(text) + "'");
  }
  return {std::string(text.substr(0, pos)), std::string(text.substr(pos + 2))};
}

std::set<std::string> render_fine_set(const LabelSet& labels) {
  std::set<std::string> out;
  for (const auto& p : labels) out.insert(render_fine(p));
  return out;
}

std::set<std::string> project_coarse(const LabelSet& labels) {
  std::set<std::string> out;
  for (const auto& p : labels) out.insert(render_coarse(p));
  return out;
}

}  // namespace narrclass
