#include <doctest.h>

#include <cmath>
#include <random>

#include "narrclass/metrics.hpp"
#include "oracles.hpp"

using namespace narrclass;
using namespace narrclass::metrics;
using narrclass::oracle::naive_score;


TEST_CASE("sample_f1 definition and conventions") {
  CHECK(sample_f1({"A"}, {"A"}) == 1.0);
  CHECK(sample_f1({"A", "B"}, {"A"}) == 2.0 / 3.0);
  CHECK(sample_f1({}, {}) == 1.0);
  CHECK(sample_f1({}, {}, 0.0) == 0.0);
  CHECK(sample_f1({"A"}, {}) == 0.0);
  CHECK(sample_f1({}, {"A"}) == 0.0);
  CHECK(sample_f1({"A"}, {"B"}) == 0.0);
}

TEST_CASE("sample_f1 symmetry and monotonicity over all subsets of a 4-label universe") {
  const std::vector<std::string> u{"a", "b", "c", "d"};
  auto subset = [&](int mask) {
    LabelStrings s;
    for (int i = 0; i < 4; ++i) {
      if (mask >> i & 1) s.insert(u[static_cast<std::size_t>(i)]);
    }
    return s;
  };
  for (int pm = 0; pm < 16; ++pm) {
    for (int gm = 0; gm < 16; ++gm) {
      auto p = subset(pm);
      auto g = subset(gm);
      CHECK(sample_f1(p, g) == sample_f1(g, p));
      if (pm == gm && pm != 0) CHECK(sample_f1(p, g) == 1.0);
      // Adding a gold label to the prediction never shrinks the intersection.
      for (const auto& l : g) {
        auto p2 = p;
        p2.insert(l);
        std::size_t before = 0, after = 0;
        for (const auto& x : p) before += g.contains(x);
        for (const auto& x : p2) after += g.contains(x);
        CHECK(after >= before);
        if (!p.contains(l)) CHECK(sample_f1(p2, g) >= sample_f1(p, g));
      }
    }
  }
}

TEST_CASE("perfect predictions score 1 with zero spread") {
  LabelMap gold{{"a", {{"M", "x"}}}, {"b", {LabelPair::other()}}};
  auto r = score(gold, gold);
  CHECK(r.f1_samples_fine == 1.0);
  CHECK(r.f1_samples_fine_std == 0.0);
  CHECK(r.f1_coarse == 1.0);
  CHECK(r.f1_coarse_std == 0.0);
  REQUIRE(r.per_document.size() == 2);
}

TEST_CASE("one wrong document") {
  LabelMap gold{{"a", {{"M", "B"}}}};
  LabelMap pred{{"a", {{"M", "A"}}}};
  auto r = score(pred, gold);
  CHECK(r.f1_samples_fine == 0.0);
  CHECK(r.per_document[0].coarse == 1.0);
}

TEST_CASE("4-document fixture against the naive oracle") {
  LabelMap gold{
      {"d1", {{"M1", "s1"}, {"M1", "s2"}}},
      {"d2", {{"M2", "s3"}}},
      {"d3", {LabelPair::other()}},
      {"d4", {{"M1", "Other"}, {"M2", "s4"}}},
  };
  LabelMap pred{
      {"d1", {{"M1", "s1"}}},
      {"d2", {{"M1", "s1"}, {"M2", "s3"}}},
      {"d3", {{"M2", "s4"}}},
      {"d4", {{"M1", "Other"}, {"M2", "s5"}}},
  };
  const auto oracle = naive_score(pred, gold, 1.0);
  // Frozen from the oracle: fine = (2/3 + 2/3 + 0 + 1/2) / 4, coarse samples = (1 + 2/3 + 0 + 1) / 4.
  CHECK(oracle.fine_mean == doctest::Approx(11.0 / 24.0).epsilon(1e-15));
  CHECK(oracle.coarse_samples == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  // Coarse labels M1 (tp 2, fp 1, fn 0), M2 (tp 2, fp 1, fn 0), Other (tp 0, fp 0, fn 1).
  CHECK(oracle.coarse_macro == doctest::Approx((0.8 + 0.8 + 0.0) / 3.0).epsilon(1e-15));

  auto samples = score(pred, gold, {CoarseMode::Samples});
  CHECK(std::abs(samples.f1_samples_fine - oracle.fine_mean) <= 1e-12);
  CHECK(std::abs(samples.f1_samples_fine_std - oracle.fine_std) <= 1e-12);
  CHECK(std::abs(samples.f1_coarse - oracle.coarse_samples) <= 1e-12);
  CHECK(std::abs(samples.f1_coarse_std - oracle.coarse_std) <= 1e-12);

  auto macro = score(pred, gold, {CoarseMode::Macro});
  CHECK(std::abs(macro.f1_coarse - oracle.coarse_macro) <= 1e-12);
  CHECK(macro.coarse_mode == CoarseMode::Macro);
}

TEST_CASE("score matches the oracle on 200 random instances") {
  std::mt19937_64 rng(2025);
  for (int iter = 0; iter < 200; ++iter) {
    const int docs = 1 + static_cast<int>(rng() % 20);
    const int labels = 1 + static_cast<int>(rng() % 10);
    std::vector<LabelPair> universe;
    for (int l = 0; l < labels; ++l) {
      universe.push_back(l == 0 ? LabelPair::other()
                                : LabelPair{"M" + std::to_string(l % 3), "s" + std::to_string(l)});
    }
    LabelMap gold, pred;
    for (int d = 0; d < docs; ++d) {
      LabelSet g, p;
      for (const auto& l : universe) {
        if (rng() % 3 == 0) g.insert(l);
        if (rng() % 3 == 0) p.insert(l);
      }
      const auto id = "d" + std::to_string(d);
      gold[id] = g;
      if (rng() % 10) pred[id] = p;
    }
    const double be = iter % 2 ? 1.0 : 0.0;
    auto oracle = naive_score(pred, gold, be);
    auto rs = score(pred, gold, {CoarseMode::Samples, be});
    auto rm = score(pred, gold, {CoarseMode::Macro, be});
    CHECK(std::abs(rs.f1_samples_fine - oracle.fine_mean) <= 1e-12);
    CHECK(std::abs(rs.f1_samples_fine_std - oracle.fine_std) <= 1e-12);
    CHECK(std::abs(rs.f1_coarse - oracle.coarse_samples) <= 1e-12);
    CHECK(std::abs(rs.f1_coarse_std - oracle.coarse_std) <= 1e-12);
    CHECK(std::abs(rm.f1_coarse - oracle.coarse_macro) <= 1e-12);
  }
}

TEST_CASE("missing predictions warn; unknown prediction ids fail") {
  LabelMap gold{{"a", {{"M", "x"}}}, {"b", {{"M", "y"}}}};
  auto r = score({{"a", {{"M", "x"}}}}, gold);
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("'b'") != std::string::npos);
  CHECK(r.f1_samples_fine == 0.5);

  try {
    score({{"zzz", {}}}, gold);
    FAIL("expected ScoreError");
  } catch (const ScoreError& e) {
    CHECK(std::string(e.what()).find("zzz") != std::string::npos);
  }
}

TEST_CASE("taxonomy universe counts absent labels as zero") {
  LabelMap gold{{"a", {{"M", "x"}}}};
  ScoreOptions opts{CoarseMode::Macro, 1.0, MacroUniverse::Taxonomy, {"M", "N", "Other"}};
  auto r = score(gold, gold, opts);
  CHECK(r.f1_coarse == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("parallel per-document kernel equals the serial reference exactly") {
  std::mt19937_64 rng(3);
  std::vector<LabelStrings> p(5000), g(5000);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (int l = 0; l < 8; ++l) {
      if (rng() % 2) p[i].insert("l" + std::to_string(l));
      if (rng() % 2) g[i].insert("l" + std::to_string(l));
    }
  }
  CHECK(per_document_f1(p, g, 1.0) == per_document_f1_serial(p, g, 1.0));
}

TEST_CASE("language breakdown and report rendering") {
  LabelMap gold{{"a", {{"M", "x"}}}, {"b", {{"M", "y"}}}};
  LabelMap pred{{"a", {{"M", "x"}}}, {"b", {{"M", "z"}}}};
  auto r = score(pred, gold, {}, {{"a", "en"}, {"b", "pt"}});
  REQUIRE(r.by_language.size() == 2);
  CHECK(r.by_language.at("en").fine == 1.0);
  CHECK(r.by_language.at("pt").fine == 0.0);
  auto j = r.to_json();
  for (const char* key : {"f1_samples_fine", "f1_samples_fine_std", "f1_coarse", "f1_coarse_std",
                          "coarse_mode", "per_document", "by_language", "warnings"}) {
    CHECK(j.contains(key));
  }
  CHECK(r.to_table().find("F1 Samples Fine") != std::string::npos);
  CHECK(r.per_document_csv().starts_with("id,f1_fine,f1_coarse\n\"a\","));
}
