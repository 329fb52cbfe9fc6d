#include "narrclass/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace narrclass::metrics {
namespace {

std::size_t intersection_size(const LabelStrings& a, const LabelStrings& b) {
  std::size_t n = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++n;
      ++ia;
      ++ib;
    }
  }
  return n;
}

void check_aligned(std::span<const LabelStrings> pred, std::span<const LabelStrings> gold) {
  if (pred.size() != gold.size()) throw std::invalid_argument("prediction/gold length mismatch");
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

double sample_f1(const LabelStrings& pred, const LabelStrings& gold, double both_empty) {
  if (pred.empty() && gold.empty()) return both_empty;
  const auto denom = pred.size() + gold.size();
  return 2.0 * static_cast<double>(intersection_size(pred, gold)) / static_cast<double>(denom);
}

CoarseMode parse_coarse_mode(std::string_view name) {
  if (name == "samples") return CoarseMode::Samples;
  if (name == "macro") return CoarseMode::Macro;
  throw std::invalid_argument("unknown coarse mode '" + std::string(name) + "'");
}

const char* to_string(CoarseMode mode) { return mode == CoarseMode::Samples ? "samples" : "macro"; }

std::vector<double> per_document_f1(std::span<const LabelStrings> pred,
                                    std::span<const LabelStrings> gold, double both_empty) {
  check_aligned(pred, gold);
  std::vector<double> out(pred.size());
  const auto n = static_cast<long>(pred.size());
#pragma omp parallel for schedule(static) if (n > 256)
  for (long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = sample_f1(pred[k], gold[k], both_empty);
  }
  return out;
}

std::vector<double> per_document_f1_serial(std::span<const LabelStrings> pred,
                                           std::span<const LabelStrings> gold, double both_empty) {
  check_aligned(pred, gold);
  std::vector<double> out;
  out.reserve(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) out.push_back(sample_f1(pred[i], gold[i], both_empty));
  return out;
}

double macro_f1(std::span<const LabelStrings> pred, std::span<const LabelStrings> gold,
                const LabelStrings& universe) {
  check_aligned(pred, gold);
  if (universe.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& label : universe) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const bool p = pred[i].contains(label);
      const bool g = gold[i].contains(label);
      tp += p && g;
      fp += p && !g;
      fn += !p && g;
    }
    const auto denom = 2 * tp + fp + fn;
    sum += denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
  }
  return sum / static_cast<double>(universe.size());
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double population_std(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double m = mean(values);
  double s = 0.0;
  for (double v : values) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(values.size()));
}

EvalReport score(const LabelMap& predictions, const LabelMap& gold, const ScoreOptions& options,
                 const std::map<std::string, std::string>& languages) {
  std::vector<std::string> unknown;
  for (const auto& [id, _] : predictions) {
    if (!gold.contains(id)) unknown.push_back(id);
  }
  if (!unknown.empty()) {
    std::string msg = "predicted ids absent from gold:";
    for (const auto& id : unknown) msg += " " + id;
    throw ScoreError(msg);
  }

  EvalReport report;
  report.coarse_mode = options.coarse_mode;

  std::vector<LabelStrings> pred_fine, gold_fine, pred_coarse, gold_coarse;
  std::vector<std::string> ids;
  for (const auto& [id, gold_labels] : gold) {
    ids.push_back(id);
    gold_fine.push_back(render_fine_set(gold_labels));
    gold_coarse.push_back(project_coarse(gold_labels));
    auto it = predictions.find(id);
    if (it == predictions.end()) {
      report.warnings.push_back("no prediction for '" + id + "', scored as empty");
      pred_fine.emplace_back();
      pred_coarse.emplace_back();
    } else {
      pred_fine.push_back(render_fine_set(it->second));
      pred_coarse.push_back(project_coarse(it->second));
    }
  }

  auto fine = per_document_f1(pred_fine, gold_fine, options.both_empty);
  auto coarse = per_document_f1(pred_coarse, gold_coarse, options.both_empty);

  report.f1_samples_fine = mean(fine);
  report.f1_samples_fine_std = population_std(fine);
  report.f1_coarse_std = population_std(coarse);
  if (options.coarse_mode == CoarseMode::Samples) {
    report.f1_coarse = mean(coarse);
  } else {
    LabelStrings universe;
    if (options.universe == MacroUniverse::Taxonomy) {
      universe.insert(options.taxonomy_coarse_labels.begin(), options.taxonomy_coarse_labels.end());
    } else {
      for (const auto& s : pred_coarse) universe.insert(s.begin(), s.end());
      for (const auto& s : gold_coarse) universe.insert(s.begin(), s.end());
    }
    report.f1_coarse = macro_f1(pred_coarse, gold_coarse, universe);
  }

  for (std::size_t i = 0; i < ids.size(); ++i) {
    report.per_document.push_back({ids[i], fine[i], coarse[i]});
  }

  if (!languages.empty()) {
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      auto it = languages.find(ids[i]);
      auto& g = groups[it == languages.end() ? std::string("unknown") : it->second];
      g.first.push_back(fine[i]);
      g.second.push_back(coarse[i]);
    }
    for (const auto& [lang, g] : groups) {
      report.by_language[lang] = {g.first.size(), mean(g.first), mean(g.second)};
    }
  }
  return report;
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json docs = nlohmann::json::array();
  for (const auto& d : per_document) {
    docs.push_back({{"id", d.id}, {"f1_fine", d.fine}, {"f1_coarse", d.coarse}});
  }
  nlohmann::json langs = nlohmann::json::object();
  for (const auto& [lang, s] : by_language) {
    langs[lang] = {{"documents", s.documents},
                   {"f1_samples_fine", s.fine},
                   {"f1_samples_coarse", s.coarse_samples}};
  }
  return {{"f1_samples_fine", f1_samples_fine},
          {"f1_samples_fine_std", f1_samples_fine_std},
          {"f1_coarse", f1_coarse},
          {"f1_coarse_std", f1_coarse_std},
          {"coarse_mode", to_string(coarse_mode)},
          {"per_document", docs},
          {"by_language", langs},
          {"warnings", warnings}};
}

std::string EvalReport::to_table() const {
  std::ostringstream out;
  const std::string coarse_name =
      coarse_mode == CoarseMode::Macro ? "F1 Macro Coarse" : "F1 Samples Coarse";
  out << "metric               value   std\n";
  out << "-------------------- ------- -------\n";
  char line[96];
  std::snprintf(line, sizeof line, "%-20s %s  %s\n", coarse_name.c_str(), fmt(f1_coarse).c_str(),
                fmt(f1_coarse_std).c_str());
  out << line;
  std::snprintf(line, sizeof line, "%-20s %s  %s\n", "F1 Samples Fine", fmt(f1_samples_fine).c_str(),
                fmt(f1_samples_fine_std).c_str());
  out << line;
  out << "documents: " << per_document.size() << '\n';
  for (const auto& [lang, s] : by_language) {
    out << "  [" << lang << "] n=" << s.documents << " fine=" << fmt(s.fine)
        << " coarse(samples)=" << fmt(s.coarse_samples) << '\n';
  }
  return out.str();
}

std::string EvalReport::per_document_csv() const {
  std::ostringstream out;
  out << "id,f1_fine,f1_coarse\n";
  for (const auto& d : per_document) {
    out << '"';
    for (char c : d.id) {
      if (c == '"') out << '"';
      out << c;
    }
    out << "\"," << fmt(d.fine) << ',' << fmt(d.coarse) << '\n';
  }
  return out.str();
}

}  // namespace narrclass::metrics
