#include "narrclass/taxonomy.hpp"

#include <cerrno>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

#include "narrclass/labels.hpp"
#include "narrclass/text.hpp"

namespace narrclass {
namespace {

using json = nlohmann::json;

void check_name(const std::string& name, const std::string& where, bool is_main) {
  if (text::trim(name).empty()) throw TaxonomyValidationError(where + ": empty name");
  if (text::normalize_label(name) == text::normalize_label(kOther)) {
    throw TaxonomyValidationError(where + ": '" + name + "' uses the reserved name \"Other\"");
  }
  // '#' is the model's list separator; ';', tab and newline are prediction-file delimiters.
  for (char c : {'#', ';', '\t', '\n', '\r'}) {
    if (name.find(c) != std::string::npos) {
      throw TaxonomyValidationError(where + ": '" + name + "' contains a reserved delimiter");
    }
  }
  if (is_main && name.find(": ") != std::string::npos) {
    throw TaxonomyValidationError(where + ": main narrative '" + name + "' contains \": \"");
  }
}

void check_unique(std::set<std::string>& seen, const std::string& name, const std::string& where) {
  if (!seen.insert(text::normalize_label(name)).second) {
    throw TaxonomyValidationError(where + ": duplicate name '" + name + "'");
  }
}

void validate(const std::vector<Category>& categories) {
  if (categories.empty()) throw TaxonomyValidationError("taxonomy has no categories");
  std::set<std::string> cat_names;
  for (const auto& cat : categories) {
    const std::string cat_where = "category '" + cat.name + "'";
    check_name(cat.name, "category", false);
    check_unique(cat_names, cat.name, "category");
    if (cat.narratives.empty()) throw TaxonomyValidationError(cat_where + ": no narratives");
    std::set<std::string> main_names;
    for (const auto& main : cat.narratives) {
      const std::string main_where = cat_where + " / narrative '" + main.name + "'";
      check_name(main.name, cat_where + " / narrative", true);
      check_unique(main_names, main.name, cat_where);
      if (text::trim(main.explanation).empty()) {
        throw TaxonomyValidationError(main_where + ": empty explanation");
      }
      if (main.subnarratives.empty()) {
        throw TaxonomyValidationError(main_where + ": no sub-narratives");
      }
      std::set<std::string> sub_names;
      for (const auto& sub : main.subnarratives) {
        check_name(sub.name, main_where + " / sub-narrative", false);
        check_unique(sub_names, sub.name, main_where);
        if (text::trim(sub.explanation).empty()) {
          throw TaxonomyValidationError(main_where + " / sub-narrative '" + sub.name +
                                        "': empty explanation");
        }
      }
    }
  }
}

std::string get_string(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw TaxonomyParseError(where + ": missing string field \"" + key + "\"");
  }
  return it->get<std::string>();
}

const json& get_array(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_array()) {
    throw TaxonomyParseError(where + ": missing array field \"" + key + "\"");
  }
  return *it;
}

}  // namespace

Taxonomy::Taxonomy(std::vector<Category> categories) : categories_(std::move(categories)) {
  validate(categories_);
}

Taxonomy Taxonomy::from_json(const json& doc) {
  if (!doc.is_object()) throw TaxonomyParseError("taxonomy document must be an object");
  std::vector<Category> cats;
  std::size_t ci = 0;
  for (const auto& jc : get_array(doc, "categories", "taxonomy")) {
    const std::string cw = "categories[" + std::to_string(ci++) + "]";
    if (!jc.is_object()) throw TaxonomyParseError(cw + ": expected object");
    Category cat{get_string(jc, "name", cw), {}};
    std::size_t ni = 0;
    for (const auto& jn : get_array(jc, "narratives", cw)) {
      const std::string nw = cw + ".narratives[" + std::to_string(ni++) + "]";
      if (!jn.is_object()) throw TaxonomyParseError(nw + ": expected object");
      MainNarrative main{get_string(jn, "name", nw), get_string(jn, "explanation", nw), {}};
      std::size_t si = 0;
      for (const auto& js : get_array(jn, "subnarratives", nw)) {
        const std::string sw = nw + ".subnarratives[" + std::to_string(si++) + "]";
        if (!js.is_object()) throw TaxonomyParseError(sw + ": expected object");
        main.subnarratives.push_back({get_string(js, "name", sw), get_string(js, "explanation", sw)});
      }
      cat.narratives.push_back(std::move(main));
    }
    cats.push_back(std::move(cat));
  }
  return Taxonomy(std::move(cats));
}

json Taxonomy::to_json() const {
  json cats = json::array();
  for (const auto& cat : categories_) {
    json narratives = json::array();
    for (const auto& main : cat.narratives) {
      json subs = json::array();
      for (const auto& sub : main.subnarratives) {
        subs.push_back({{"name", sub.name}, {"explanation", sub.explanation}});
      }
      narratives.push_back(
          {{"name", main.name}, {"explanation", main.explanation}, {"subnarratives", subs}});
    }
    cats.push_back({{"name", cat.name}, {"narratives", narratives}});
  }
  return {{"categories", cats}};
}

const Category* Taxonomy::find_category(std::string_view name) const {
  for (const auto& cat : categories_) {
    if (cat.name == name) return &cat;
  }
  return nullptr;
}

const MainNarrative* Taxonomy::find_main(std::string_view name,
                                         std::optional<std::string_view> category) const {
  for (const auto& cat : categories_) {
    if (category && cat.name != *category) continue;
    for (const auto& main : cat.narratives) {
      if (main.name == name) return &main;
    }
  }
  return nullptr;
}

const SubNarrative* Taxonomy::find_sub(std::string_view main, std::string_view sub) const {
  for (const auto& cat : categories_) {
    for (const auto& m : cat.narratives) {
      if (m.name != main) continue;
      for (const auto& s : m.subnarratives) {
        if (s.name == sub) return &s;
      }
    }
  }
  return nullptr;
}

Resolution Taxonomy::resolve(Level level, std::optional<std::string_view> parent,
                             std::string_view raw) const {
  const std::string key = text::normalize_label(raw);
  if (key.empty()) return {};
  if (key == text::normalize_label(kOther)) return {Resolution::Kind::Other, std::string(kOther)};

  auto match = [&](const std::string& name) { return text::normalize_label(name) == key; };

  switch (level) {
    case Level::Category:
      for (const auto& cat : categories_) {
        if (match(cat.name)) return {Resolution::Kind::Found, cat.name};
      }
      break;
    case Level::Main:
      for (const auto& cat : categories_) {
        if (parent && cat.name != *parent) continue;
        for (const auto& main : cat.narratives) {
          if (match(main.name)) return {Resolution::Kind::Found, main.name};
        }
      }
      break;
    case Level::Sub: {
      if (!parent) throw std::invalid_argument("sub-narrative resolution needs a parent main narrative");
      const MainNarrative* main = find_main(*parent);
      if (main == nullptr) {
        throw std::invalid_argument("unknown parent main narrative '" + std::string(*parent) + "'");
      }
      for (const auto& sub : main->subnarratives) {
        if (match(sub.name)) return {Resolution::Kind::Found, sub.name};
      }
      break;
    }
  }
  return {};
}

bool Taxonomy::is_valid_pair(std::string_view main, std::string_view sub) const {
  if (main == kOther) return sub == kOther;
  if (find_main(main) == nullptr) return false;
  return sub == kOther || find_sub(main, sub) != nullptr;
}

std::size_t Taxonomy::main_count() const {
  std::size_t n = 0;
  for (const auto& cat : categories_) n += cat.narratives.size();
  return n;
}

std::size_t Taxonomy::sub_count() const {
  std::size_t n = 0;
  for (const auto& cat : categories_) {
    for (const auto& main : cat.narratives) n += main.subnarratives.size();
  }
  return n;
}

Taxonomy load_taxonomy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::system_error(errno, std::generic_category(), "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw TaxonomyParseError(path.string() + ": " + e.what());
  }
  return Taxonomy::from_json(doc);
}

}  // namespace narrclass
