#pragma once

#include <filesystem>
#include <iosfwd>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "narrclass/labels.hpp"

namespace narrclass {

// One TSV row: id <TAB> coarse labels <TAB> fine labels, labels joined by ';'.
struct PredictionRow {
  std::string id;
  std::set<std::string> coarse;
  LabelSet fine;

  bool operator==(const PredictionRow&) const = default;
};

class PredictionFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Coarse column is the projection of `fine` onto main narratives.
PredictionRow make_row(std::string id, LabelSet fine);

std::vector<PredictionRow> read_predictions(std::istream& in);
std::vector<PredictionRow> load_predictions(const std::filesystem::path& path);
void write_predictions(std::ostream& out, const std::vector<PredictionRow>& rows);
void save_predictions(const std::filesystem::path& path, const std::vector<PredictionRow>& rows);

}  // namespace narrclass
