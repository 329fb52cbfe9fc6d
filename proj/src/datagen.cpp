#include "narrclass/datagen.hpp"

#include <cmath>
#include <ostream>

#include <nlohmann/json.hpp>

#include "narrclass/prompt.hpp"
#include "narrclass/text.hpp"

namespace narrclass::datagen {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

// Length of an "Article <n>:" marker at the start of `line` (after leading
// blanks), or 0.
std::size_t marker_length(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && is_space(line[i])) ++i;
  constexpr std::string_view word = "article";
  if (line.size() - i < word.size()) return 0;
  for (std::size_t j = 0; j < word.size(); ++j) {
    char c = line[i + j];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != word[j]) return 0;
  }
  i += word.size();
  const std::size_t before_ws = i;
  while (i < line.size() && is_space(line[i])) ++i;
  if (i == before_ws) return 0;
  const std::size_t digits = i;
  while (i < line.size() && line[i] >= '0' && line[i] <= '9') ++i;
  if (i == digits) return 0;
  while (i < line.size() && is_space(line[i])) ++i;
  if (i >= line.size() || line[i] != ':') return 0;
  return i + 1;
}

std::string request_id(const SubNarrativeEntry& e, int call) {
  auto key = text::hex64(text::fnv1a64(e.category + '\x1f' + e.main + '\x1f' + e.sub));
  char suffix[16];
  std::snprintf(suffix, sizeof suffix, "-%04d", call);
  return key.substr(0, 12) + suffix;
}

}  // namespace

std::vector<SubNarrativeEntry> entries(const Taxonomy& taxonomy) {
  std::vector<SubNarrativeEntry> out;
  for (const auto& cat : taxonomy.categories()) {
    for (const auto& main : cat.narratives) {
      for (const auto& sub : main.subnarratives) {
        out.push_back({cat.name, main.name, sub.name, sub.explanation});
      }
    }
  }
  return out;
}

int DatagenOptions::effective_request_cap() const {
  if (request_cap > 0) return request_cap;
  return 3 * ((target_count + kArticlesPerCall - 1) / kArticlesPerCall);
}

void DatagenOptions::validate() const {
  if (target_count < 1) throw std::invalid_argument("target count must be >= 1");
  if (!(temperature_lo <= temperature_hi)) throw std::invalid_argument("temperature range is empty");
  if (temperature_lo < 0.0 || temperature_hi > 2.0) {
    throw std::invalid_argument("temperature range must lie within [0, 2]");
  }
  if (min_words > max_words) throw std::invalid_argument("word bounds are inverted");
  if (max_tokens < 1) throw std::invalid_argument("max_tokens must be >= 1");
}

TemperatureStream::TemperatureStream(std::uint64_t seed, const SubNarrativeEntry& entry, double lo,
                                     double hi)
    : rng_(seed ^ text::fnv1a64(entry.category + '\x1f' + entry.main + '\x1f' + entry.sub)),
      lo_(lo),
      hi_(hi) {}

double TemperatureStream::next() {
  // 53 random bits -> [0, 1]; avoids the implementation-defined distributions.
  const double u = static_cast<double>(rng_() >> 11) / static_cast<double>((1ULL << 53) - 1);
  return lo_ + (hi_ - lo_) * u;
}

std::vector<std::string> split_articles(std::string_view raw) {
  std::vector<std::string> bodies;
  std::optional<std::string> current;
  for (auto line : text::split(raw, '\n')) {
    if (auto m = marker_length(line); m > 0) {
      if (current) bodies.emplace_back(text::trim(*current));
      current = std::string(line.substr(m));
    } else if (current) {
      *current += '\n';
      *current += line;
    }
  }
  if (current) bodies.emplace_back(text::trim(*current));
  return bodies;
}

GenerationResult generate_for_subnarrative(const SubNarrativeEntry& entry, CompletionBackend& backend,
                                           const DatagenOptions& options) {
  options.validate();
  GenerationResult result;
  result.entry = entry;
  TemperatureStream temps(options.seed, entry, options.temperature_lo, options.temperature_hi);
  const std::string prompt = prompt::render_datagen(entry.category, entry.sub, entry.explanation);
  const int cap = options.effective_request_cap();
  const auto target = static_cast<std::size_t>(options.target_count);

  while (result.articles.size() < target && result.calls < cap) {
    const double temperature = temps.next();
    const auto id = request_id(entry, result.calls);
    ++result.calls;
    CompletionResponse response;
    try {
      response = backend.complete({prompt, temperature, options.max_tokens, options.model});
    } catch (const BackendError& e) {
      result.error = e.what();
      break;
    }
    for (auto& body : split_articles(response.text)) {
      if (result.articles.size() >= target) break;
      const auto words = text::word_count(body);
      if (words < options.min_words || words > options.max_words) {
        ++result.rejected;
        continue;
      }
      result.articles.push_back(
          {entry.category, entry.main, entry.sub, temperature, std::move(body), words, id});
    }
  }
  result.reached_target = result.articles.size() >= target;
  if (!result.reached_target && !result.error) {
    result.warnings.push_back("request cap " + std::to_string(cap) + " reached with " +
                              std::to_string(result.articles.size()) + " of " +
                              std::to_string(target) + " articles for '" + entry.sub + "'");
  }
  return result;
}

std::vector<GenerationResult> generate_all(const Taxonomy& taxonomy, CompletionBackend& backend,
                                           const DatagenOptions& options, int parallelism) {
  if (parallelism < 1) throw std::invalid_argument("parallelism must be >= 1");
  options.validate();
  const auto todo = entries(taxonomy);
  std::vector<GenerationResult> out(todo.size());
  const auto n = static_cast<long>(todo.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(parallelism) if (parallelism > 1)
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = generate_for_subnarrative(todo[k], backend, options);
  }
  return out;
}

void write_articles(std::ostream& out, const std::vector<GenerationResult>& results) {
  for (const auto& r : results) {
    for (const auto& a : r.articles) {
      out << nlohmann::json{{"category", a.category},
                            {"main", a.main},
                            {"sub", a.sub},
                            {"temperature", a.temperature},
                            {"text", a.text},
                            {"word_count", a.word_count},
                            {"source_request_id", a.source_request_id}}
                 .dump()
          << '\n';
    }
  }
}

std::string render_explanation_prompt(const std::vector<std::string>& main_narratives,
                                      const std::vector<std::string>& sub_narratives) {
  return prompt::render_explain(main_narratives, sub_narratives);
}

std::string render_explanation_prompt(const Taxonomy& taxonomy) {
  std::vector<std::string> mains, subs;
  for (const auto& cat : taxonomy.categories()) {
    for (const auto& main : cat.narratives) {
      mains.push_back(main.name);
      for (const auto& sub : main.subnarratives) subs.push_back(main.name + ": " + sub.name);
    }
  }
  return render_explanation_prompt(mains, subs);
}

}  // namespace narrclass::datagen
