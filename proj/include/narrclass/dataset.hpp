#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "narrclass/labels.hpp"

namespace narrclass {

struct Document {
  std::string id;
  std::string text;
  std::string language = "en";
  std::optional<std::vector<LabelPair>> gold;
};

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// JSON lines: {"id", "text", "language"?, "labels"?: [{"main", "sub"}]}.
// Blank lines are skipped; errors carry the 1-based line number. Ids must be unique.
std::vector<Document> read_documents(std::istream& in);
std::vector<Document> load_documents(const std::filesystem::path& path);
void write_documents(std::ostream& out, const std::vector<Document>& docs);

}  // namespace narrclass
