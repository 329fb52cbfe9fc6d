#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace narrclass {

struct SubNarrative {
  std::string name;
  std::string explanation;
};

struct MainNarrative {
  std::string name;
  std::string explanation;
  std::vector<SubNarrative> subnarratives;
};

struct Category {
  std::string name;
  std::vector<MainNarrative> narratives;
};

class TaxonomyParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TaxonomyValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Level { Category, Main, Sub };

struct Resolution {
  enum class Kind { Found, Other, NotFound };
  Kind kind = Kind::NotFound;
  std::string name;  // canonical name when Found, "Other" when Other

  bool found() const { return kind == Kind::Found; }
  bool other() const { return kind == Kind::Other; }
};

// Two-level narrative taxonomy (category -> main narrative -> sub-narrative).
// Immutable once constructed; every constructor path runs validation.
class Taxonomy {
 public:
  explicit Taxonomy(std::vector<Category> categories);

  static Taxonomy from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;

  const std::vector<Category>& categories() const { return categories_; }

  const Category* find_category(std::string_view name) const;
  // Searches all categories, or only `category` when given.
  const MainNarrative* find_main(std::string_view name,
                                 std::optional<std::string_view> category = std::nullopt) const;
  const SubNarrative* find_sub(std::string_view main, std::string_view sub) const;

  // Normalized lookup scoped by `parent`: a category name for Level::Main
  // (optional), a main-narrative name for Level::Sub (required). Any case of
  // "Other" resolves to the sentinel.
  Resolution resolve(Level level, std::optional<std::string_view> parent, std::string_view raw) const;

  bool is_valid_pair(std::string_view main, std::string_view sub) const;

  std::size_t main_count() const;
  std::size_t sub_count() const;

 private:
  std::vector<Category> categories_;
};

Taxonomy load_taxonomy(const std::filesystem::path& path);

}  // namespace narrclass
