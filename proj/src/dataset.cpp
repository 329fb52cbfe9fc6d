#include "narrclass/dataset.hpp"

#include <cerrno>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <system_error>

#include <nlohmann/json.hpp>

#include "narrclass/text.hpp"

namespace narrclass {

std::vector<Document> read_documents(std::istream& in) {
  std::vector<Document> docs;
  std::set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    try {
      auto j = nlohmann::json::parse(line);
      Document doc;
      doc.id = j.at("id").get<std::string>();
      doc.text = j.at("text").get<std::string>();
      doc.language = j.value("language", std::string("en"));
      if (auto it = j.find("labels"); it != j.end() && !it->is_null()) {
        std::vector<LabelPair> gold;
        for (const auto& jl : *it) {
          gold.push_back({jl.at("main").get<std::string>(), jl.at("sub").get<std::string>()});
        }
        doc.gold = std::move(gold);
      }
      if (doc.id.empty()) throw DatasetError("empty id");
      if (text::trim(doc.text).empty()) throw DatasetError("empty text for id '" + doc.id + "'");
      if (!ids.insert(doc.id).second) throw DatasetError("duplicate id '" + doc.id + "'");
      docs.push_back(std::move(doc));
    } catch (const DatasetError& e) {
      throw DatasetError(where + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
      throw DatasetError(where + ": " + e.what());
    }
  }
  return docs;
}

std::vector<Document> load_documents(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::system_error(errno, std::generic_category(), "cannot open " + path.string());
  return read_documents(in);
}

void write_documents(std::ostream& out, const std::vector<Document>& docs) {
  for (const auto& doc : docs) {
    nlohmann::json j{{"id", doc.id}, {"text", doc.text}, {"language", doc.language}};
    if (doc.gold) {
      auto labels = nlohmann::json::array();
      for (const auto& p : *doc.gold) labels.push_back({{"main", p.main}, {"sub", p.sub}});
      j["labels"] = labels;
    }
    out << j.dump() << '\n';
  }
}

}  // namespace narrclass
