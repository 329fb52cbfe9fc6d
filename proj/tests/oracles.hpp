#pragma once

// Reference implementations written straight from the definitions, shared by
// the unit tests and the acceptance binary. They avoid the library's helpers.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "narrclass/labels.hpp"
#include "narrclass/lora.hpp"
#include "narrclass/metrics.hpp"

namespace narrclass::oracle {

using metrics::LabelMap;
using lora::Matrix;

// Per-definition oracle, written independently of the library: labels are
// plain strings, sets are scanned with nested loops.
struct NaiveScores {
  double fine_mean, fine_std, coarse_samples, coarse_std, coarse_macro;
};

inline double naive_f1(const std::vector<std::string>& p, const std::vector<std::string>& g, double both_empty) {
  if (p.empty() && g.empty()) return both_empty;
  int common = 0;
  for (const auto& x : p) {
    for (const auto& y : g) common += (x == y);
  }
  return 2.0 * common / static_cast<double>(p.size() + g.size());
}

inline std::vector<std::string> unique_strings(std::vector<std::string> v) {
  std::vector<std::string> out;
  for (auto& s : v) {
    bool seen = false;
    for (auto& o : out) seen = seen || o == s;
    if (!seen) out.push_back(s);
  }
  return out;
}

inline std::vector<std::string> fine_strings(const LabelSet& s) {
  std::vector<std::string> out;
  for (const auto& p : s) out.push_back(p.main == "Other" ? "Other" : p.main + ": " + p.sub);
  return unique_strings(out);
}

inline std::vector<std::string> coarse_strings(const LabelSet& s) {
  std::vector<std::string> out;
  for (const auto& p : s) out.push_back(p.main);
  return unique_strings(out);
}

inline NaiveScores naive_score(const LabelMap& pred, const LabelMap& gold, double both_empty) {
  std::vector<double> fine, coarse;
  std::vector<std::vector<std::string>> pc, gc;
  for (const auto& [id, g] : gold) {
    LabelSet p = pred.count(id) ? pred.at(id) : LabelSet{};
    fine.push_back(naive_f1(fine_strings(p), fine_strings(g), both_empty));
    pc.push_back(coarse_strings(p));
    gc.push_back(coarse_strings(g));
    coarse.push_back(naive_f1(pc.back(), gc.back(), both_empty));
  }
  auto mean_of = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  };
  auto std_of = [&](const std::vector<double>& v) {
    double m = mean_of(v), s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return v.empty() ? 0.0 : std::sqrt(s / static_cast<double>(v.size()));
  };
  std::vector<std::string> labels;
  for (auto& v : pc) labels.insert(labels.end(), v.begin(), v.end());
  for (auto& v : gc) labels.insert(labels.end(), v.begin(), v.end());
  labels = unique_strings(labels);
  double macro = 0;
  for (const auto& l : labels) {
    int tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < pc.size(); ++i) {
      bool p = std::find(pc[i].begin(), pc[i].end(), l) != pc[i].end();
      bool g = std::find(gc[i].begin(), gc[i].end(), l) != gc[i].end();
      tp += p && g;
      fp += p && !g;
      fn += !p && g;
    }
    macro += 2.0 * tp / (2.0 * tp + fp + fn);
  }
  macro = labels.empty() ? 0.0 : macro / static_cast<double>(labels.size());
  return {mean_of(fine), std_of(fine), mean_of(coarse), std_of(coarse), macro};
}

// Triple-loop oracle for h = W0 x + (alpha / r) B (A x), kept separate from the library.
inline std::vector<double> oracle_forward(const Matrix& w0, const Matrix& a, const Matrix& b, double alpha,
                                   const std::vector<double>& x) {
  const std::size_t d = w0.rows(), k = w0.cols(), r = a.rows();
  std::vector<double> ax(r, 0.0), h(d, 0.0);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < k; ++j) ax[i] += a(i, j) * x[j];
  }
  for (std::size_t i = 0; i < d; ++i) {
    double base = 0.0, upd = 0.0;
    for (std::size_t j = 0; j < k; ++j) base += w0(i, j) * x[j];
    for (std::size_t j = 0; j < r; ++j) upd += b(i, j) * ax[j];
    h[i] = base + alpha / static_cast<double>(r) * upd;
  }
  return h;
}

}  // namespace narrclass::oracle
