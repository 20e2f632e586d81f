//
// Copyright 2026 The Dialogic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//


#include "dialogic/evaluation.h"

#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "dialogic/errors.h"
#include "fixtures.h"
#include "json.hpp"

namespace dialogic {
namespace {

// `counts[c]` examples of each category c, with distinct texts.
std::vector<LabeledExample> pool_with(const std::array<std::size_t, kNumCategories>& counts) {
  std::vector<LabeledExample> pool;
  for (std::size_t c = 0; c < kNumCategories; ++c) {
    for (std::size_t i = 0; i < counts[c]; ++i) {
      LabeledExample ex;
      ex.uid = "p" + std::to_string(c) + "-" + std::to_string(i);
      ex.text = "文本" + ex.uid;
      ex.label = category_from_index(c);
      ex.split = Split::kTest;
      pool.push_back(ex);
    }
  }
  return pool;
}

std::array<std::size_t, kNumCategories> uniform_counts(std::size_t n) {
  std::array<std::size_t, kNumCategories> counts;
  counts.fill(n);
  return counts;
}

fixtures::OracleEncoder oracle_for(const std::vector<LabeledExample>& pool) {
  std::map<std::string, std::size_t> labels;
  for (const auto& ex : pool) labels[ex.text] = category_index(ex.label);
  return fixtures::OracleEncoder(labels);
}

TEST_CASE("exact-fit pool gives eight balanced sets") {
  const auto pool = pool_with(uniform_counts(20));
  const auto sets = build_binary_sets(pool, 20, 3);
  REQUIRE(sets.size() == 8);
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const auto& set = sets[k];
    CHECK(set.positive == category_from_index(k));
    CHECK(set.positives.size() == 20);
    CHECK(set.negatives.size() == 20);
    std::set<std::string> uids;
    for (const auto& ex : set.positives) {
      CHECK(ex.label == set.positive);
      uids.insert(ex.uid);
    }
    for (const auto& ex : set.negatives) {
      CHECK(ex.label != set.positive);
      uids.insert(ex.uid);
    }
    CHECK(uids.size() == 40);
  }
}

TEST_CASE("sizing errors name the category") {
  auto counts = uniform_counts(10);
  counts[0] = 0;
  try {
    build_binary_sets(pool_with(counts), 10, 1);
    FAIL("expected a sizing error");
  } catch (const SizingError& e) {
    CHECK(e.category() == Category::kGreeting);
    CHECK(e.shortfall() == 10);
    CHECK(std::string(e.what()).find("greeting") != std::string::npos);
  }
  counts = uniform_counts(1);
  counts[2] = 10;
  CHECK_THROWS_AS(build_binary_sets(pool_with(counts), 10, 1), SizingError);
}

TEST_CASE("binary sets are deterministic") {
  const auto pool = pool_with(uniform_counts(30));
  const auto a = build_binary_sets(pool, 12, 8);
  const auto b = build_binary_sets(pool, 12, 8);
  const auto c = build_binary_sets(pool, 12, 9);
  bool differs = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].positives == b[k].positives);
    CHECK(a[k].negatives == b[k].negatives);
    differs |= !(a[k].negatives == c[k].negatives);
  }
  CHECK(differs);
}

TEST_CASE("negatives follow pool shares") {
  // Unequal shares among the eight non-guidance labels.
  std::array<std::size_t, kNumCategories> counts = {10, 20, 5, 30, 10, 20, 10, 40, 60};
  const auto pool = pool_with(counts);
  const std::size_t guidance = category_index(Category::kGuidance);
  std::size_t negative_total = 0;
  for (std::size_t c = 0; c < kNumCategories; ++c) {
    if (c != guidance) negative_total += counts[c];
  }
  std::map<std::size_t, std::size_t> drawn;
  std::size_t total = 0;
  for (std::uint64_t seed = 0; total < 10000; ++seed) {
    const auto sets = build_binary_sets(pool, 5, seed);
    for (const auto& ex : sets[guidance].negatives) {
      ++drawn[category_index(ex.label)];
      ++total;
    }
  }
  CHECK(drawn.count(guidance) == 0);
  for (std::size_t c = 0; c < kNumCategories; ++c) {
    if (c == guidance) continue;
    const double share = static_cast<double>(counts[c]) / static_cast<double>(negative_total);
    CHECK(std::abs(static_cast<double>(drawn[c]) / static_cast<double>(total) - share) <= 0.03);
  }
}

TEST_CASE("metrics from a hand-built confusion") {
  const auto m = metrics_from_confusion({3, 1, 2, 4});
  CHECK(m.accuracy == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(m.precision == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(m.recall == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(m.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  const auto none = metrics_from_confusion({0, 0, 5, 5});
  CHECK(none.precision == 0.0);
  CHECK(none.recall == 0.0);
  CHECK(none.f1 == 0.0);
  CHECK(none.accuracy == 0.5);
  CHECK(metrics_from_confusion({0, 3, 0, 7}).recall == 0.0);
  CHECK(metrics_from_confusion({4, 0, 0, 4}).f1 == 1.0);
}

TEST_CASE("binary confusion treats every other class as negative") {
  const std::vector<std::size_t> predicted = {2, 2, 0, 8, 2, 1};
  const std::vector<std::size_t> truth = {2, 1, 2, 3, 2, 1};
  CHECK(binary_confusion(predicted, truth, 2) == Confusion{2, 1, 1, 2});
}

TEST_CASE("oracle stub scores perfectly") {
  const auto pool = pool_with(uniform_counts(15));
  const auto sets = build_binary_sets(pool, 15, 2);
  const auto report = evaluate_all(oracle_for(pool), sets);
  for (const auto& r : report.per_category) {
    CHECK(r.metrics.accuracy == 1.0);
    CHECK(r.metrics.precision == 1.0);
    CHECK(r.metrics.recall == 1.0);
    CHECK(r.metrics.f1 == 1.0);
  }
  CHECK(report.macro_accuracy == 1.0);
  CHECK(report.macro_f1 == 1.0);
  CHECK(report.micro_accuracy == 1.0);
  CHECK(report.micro_f1 == 1.0);
}

TEST_CASE("always-positive stub on balanced sets") {
  const auto pool = pool_with(uniform_counts(15));
  const auto sets = build_binary_sets(pool, 15, 2);
  for (const auto& set : sets) {
    const auto r = evaluate_binary(fixtures::ConstantEncoder(category_index(set.positive)), set);
    CHECK(r.metrics.accuracy == 0.5);
    CHECK(r.metrics.precision == 0.5);
    CHECK(r.metrics.recall == 1.0);
    CHECK(r.metrics.f1 == 2.0 / 3.0);
  }
}

TEST_CASE("evaluation rejects a mismatched class count") {
  struct Wide final : fixtures::StubEncoder {
    std::size_t n_classes() const override { return 4; }
    std::size_t predict(const std::string&) const override { return 0; }
  };
  const auto sets = build_binary_sets(pool_with(uniform_counts(2)), 2, 1);
  CHECK_THROWS_AS(evaluate_binary(Wide{}, sets[0]), ContractViolation);
}

std::vector<CategoryResult> results_with(const std::vector<Confusion>& confusions) {
  std::vector<CategoryResult> out;
  for (std::size_t k = 0; k < confusions.size(); ++k) {
    out.push_back({category_from_index(k), confusions[k], metrics_from_confusion(confusions[k])});
  }
  return out;
}

TEST_CASE("aggregation of identical confusions") {
  // TP 8, FP 2, FN 2, TN 8: F1 = 0.8.
  const auto report = aggregate(results_with(std::vector<Confusion>(8, Confusion{8, 2, 2, 8})));
  CHECK(report.macro_f1 == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(report.micro_f1 == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(report.macro_accuracy == report.micro_accuracy);
  CHECK(report.macro_f1 == report.micro_f1);
}

TEST_CASE("macro is the arithmetic mean") {
  // F1 1.0, 0.6 and six at 0.8.
  std::vector<Confusion> confusions(8, Confusion{8, 2, 2, 8});
  confusions[0] = {10, 0, 0, 10};
  confusions[1] = {6, 4, 4, 6};
  const auto report = aggregate(results_with(confusions));
  CHECK(std::abs(report.macro_f1 - 0.8) <= 1e-9);
}

TEST_CASE("micro uses pooled counts") {
  const std::vector<Confusion> confusions = {{5, 1, 0, 6}, {2, 3, 4, 1}, {0, 0, 7, 7}, {9, 9, 1, 1},
                                             {3, 0, 3, 6}, {1, 2, 3, 4}, {7, 1, 1, 7}, {4, 4, 4, 4}};
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  double f1_sum = 0.0, acc_sum = 0.0;
  for (const auto& c : confusions) {
    tp += c.tp;
    fp += c.fp;
    fn += c.fn;
    tn += c.tn;
    const double p = c.tp + c.fp == 0 ? 0.0 : static_cast<double>(c.tp) / (c.tp + c.fp);
    const double r = c.tp + c.fn == 0 ? 0.0 : static_cast<double>(c.tp) / (c.tp + c.fn);
    f1_sum += p + r == 0.0 ? 0.0 : 2 * p * r / (p + r);
    acc_sum += static_cast<double>(c.tp + c.tn) / (c.tp + c.fp + c.fn + c.tn);
  }
  const double p = static_cast<double>(tp) / (tp + fp);
  const double r = static_cast<double>(tp) / (tp + fn);
  const auto report = aggregate(results_with(confusions));
  CHECK(report.micro_f1 == doctest::Approx(2 * p * r / (p + r)).epsilon(1e-12));
  CHECK(report.micro_accuracy ==
        doctest::Approx(static_cast<double>(tp + tn) / (tp + fp + fn + tn)).epsilon(1e-12));
  CHECK(std::abs(report.macro_f1 - f1_sum / 8) <= 1e-9);
  CHECK(std::abs(report.macro_accuracy - acc_sum / 8) <= 1e-9);
}

TEST_CASE("aggregation requires every category once") {
  auto results = results_with(std::vector<Confusion>(8, Confusion{1, 1, 1, 1}));
  auto missing = results;
  missing.pop_back();
  CHECK_THROWS_AS(aggregate(missing), std::invalid_argument);
  auto repeated = results;
  repeated[7].category = Category::kGreeting;
  CHECK_THROWS_AS(aggregate(repeated), std::invalid_argument);
}

TEST_CASE("flipping a correct prediction never raises accuracy") {
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::size_t> truth(20), predicted(20);
    for (std::size_t i = 0; i < 20; ++i) {
      truth[i] = rng.uniform_index(3);
      predicted[i] = rng.uniform_index(3);
    }
    const auto before = metrics_from_confusion(binary_confusion(predicted, truth, 0));
    for (std::size_t i = 0; i < 20; ++i) {
      const bool correct = (predicted[i] == 0) == (truth[i] == 0);
      if (!correct) continue;
      auto flipped = predicted;
      flipped[i] = truth[i] == 0 ? 1 : 0;
      CHECK(metrics_from_confusion(binary_confusion(flipped, truth, 0)).accuracy <= before.accuracy);
      break;
    }
    CHECK(before.f1 >= 0.0);
    CHECK(before.f1 <= 1.0);
  }
}

TEST_CASE("report JSON and table layout") {
  const auto pool = pool_with(uniform_counts(6));
  const auto sets = build_binary_sets(pool, 6, 2);
  RunMetadata meta{"hard", "abc", 7, "ff"};
  const auto report = evaluate_all(oracle_for(pool), sets, meta);
  const auto doc = nlohmann::json::parse(report.to_json());
  CHECK(doc["per_category"].size() == 8);
  CHECK(doc["metadata"]["seed"] == 7);
  std::vector<std::pair<std::string, MetricsReport>> variants = {{"baseline", report}, {"hard", report}};
  const auto table = render_table(variants);
  for (const auto& name : category_names()) {
    if (name == "others") {
      CHECK(table.find(name) == std::string::npos);
    } else {
      CHECK(table.find(name) != std::string::npos);
    }
  }
  CHECK(table.find("macro") != std::string::npos);
  CHECK(table.find("micro") != std::string::npos);
}

TEST_CASE("one-vs-rest macro F1 ignores others as a positive class") {
  std::vector<std::size_t> truth, predicted;
  for (std::size_t c = 0; c < kNumCategories; ++c) {
    truth.push_back(c);
    predicted.push_back(c);
  }
  CHECK(one_vs_rest_macro_f1(predicted, truth) == 1.0);
  predicted[8] = 0;  // an "others" example predicted as greeting
  const double expected = (2.0 / 3.0 + 7.0) / 8.0;
  CHECK(one_vs_rest_macro_f1(predicted, truth) == doctest::Approx(expected).epsilon(1e-12));
}

}  // namespace
}  // namespace dialogic
