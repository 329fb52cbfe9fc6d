#include "narrclass/prediction_file.hpp"

#include <cerrno>
#include <fstream>
#include <istream>
#include <ostream>
#include <system_error>

#include "narrclass/text.hpp"

namespace narrclass {
namespace {

template <typename Set>
std::string join(const Set& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ';';
    out += s;
  }
  return out;
}

}  // namespace

PredictionRow make_row(std::string id, LabelSet fine) {
  PredictionRow row{std::move(id), project_coarse(fine), std::move(fine)};
  return row;
}

std::vector<PredictionRow> read_predictions(std::istream& in) {
  std::vector<PredictionRow> rows;
  std::set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    auto cols = text::split(line, '\t');
    if (cols.size() != 3) {
      throw PredictionFormatError(where + "expected 3 tab-separated columns, found " +
                                  std::to_string(cols.size()));
    }
    PredictionRow row;
    row.id = std::string(text::trim(cols[0]));
    if (row.id.empty()) throw PredictionFormatError(where + "empty id");
    if (!ids.insert(row.id).second) throw PredictionFormatError(where + "duplicate id '" + row.id + "'");
    for (auto c : text::split(cols[1], ';')) {
      auto t = text::trim(c);
      if (!t.empty()) row.coarse.emplace(t);
    }
    for (auto f : text::split(cols[2], ';')) {
      auto t = text::trim(f);
      if (t.empty()) continue;
      try {
        row.fine.insert(parse_fine(t));
      } catch (const std::invalid_argument& e) {
        throw PredictionFormatError(where + e.what());
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<PredictionRow> load_predictions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::system_error(errno, std::generic_category(), "cannot open " + path.string());
  try {
    return read_predictions(in);
  } catch (const PredictionFormatError& e) {
    throw PredictionFormatError(path.string() + ": " + e.what());
  }
}

void write_predictions(std::ostream& out, const std::vector<PredictionRow>& rows) {
  for (const auto& row : rows) {
    out << row.id << '\t' << join(row.coarse) << '\t' << join(render_fine_set(row.fine)) << '\n';
  }
}

void save_predictions(const std::filesystem::path& path, const std::vector<PredictionRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::system_error(errno, std::generic_category(), "cannot write " + path.string());
  write_predictions(out, rows);
}

}  // namespace narrclass
