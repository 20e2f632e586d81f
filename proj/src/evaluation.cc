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

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "dialogic/errors.h"
#include "dialogic/rng.h"
#include "json.hpp"

namespace dialogic {
namespace {

// Uniform sample of k indices from `candidates` without replacement, in
// draw order (partial Fisher-Yates).
std::vector<std::size_t> sample_without_replacement(std::vector<std::size_t> candidates,
                                                    std::size_t k, Rng& rng) {
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.uniform_index(candidates.size() - i);
    std::swap(candidates[i], candidates[j]);
  }
  candidates.resize(k);
  return candidates;
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::vector<BinaryTestSet> build_binary_sets(std::span<const LabeledExample> test_pool,
                                             std::size_t n_per_side, std::uint64_t seed) {
  if (n_per_side == 0) throw ConfigError("eval.n_per_side", "must be positive");
  std::vector<BinaryTestSet> sets;
  sets.reserve(kNumInstructionCategories);
  for (Category positive : instruction_categories()) {
    std::vector<std::size_t> pos_idx;
    std::vector<std::size_t> neg_idx;
    for (std::size_t i = 0; i < test_pool.size(); ++i) {
      (test_pool[i].label == positive ? pos_idx : neg_idx).push_back(i);
    }
    const std::string name(category_name(positive));
    if (pos_idx.size() < n_per_side) {
      const std::size_t shortfall = n_per_side - pos_idx.size();
      throw SizingError(positive, shortfall,
                        "binary set '" + name + "' needs " + std::to_string(n_per_side) +
                            " positives but the pool has " + std::to_string(pos_idx.size()) +
                            " (short by " + std::to_string(shortfall) + ")");
    }
    if (neg_idx.size() < n_per_side) {
      const std::size_t shortfall = n_per_side - neg_idx.size();
      throw SizingError(positive, shortfall,
                        "binary set '" + name + "' needs " + std::to_string(n_per_side) +
                            " negatives but the pool has " + std::to_string(neg_idx.size()) +
                            " (short by " + std::to_string(shortfall) + ")");
    }

    Rng rng(derive_seed(seed, category_index(positive)));
    BinaryTestSet set;
    set.positive = positive;
    for (std::size_t i : sample_without_replacement(std::move(pos_idx), n_per_side, rng)) {
      set.positives.push_back(test_pool[i]);
    }
    for (std::size_t i : sample_without_replacement(std::move(neg_idx), n_per_side, rng)) {
      set.negatives.push_back(test_pool[i]);
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

Confusion& Confusion::operator+=(const Confusion& other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  tn += other.tn;
  return *this;
}

BinaryMetrics metrics_from_confusion(const Confusion& c) {
  BinaryMetrics m;
  m.accuracy = ratio(c.tp + c.tn, c.total());
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  m.f1 = (m.precision + m.recall) == 0.0
             ? 0.0
             : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

Confusion binary_confusion(std::span<const std::size_t> predicted,
                           std::span<const std::size_t> truth, std::size_t positive) {
  if (predicted.size() != truth.size()) {
    throw ContractViolation("binary_confusion: predictions and labels are not aligned");
  }
  Confusion c;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool pred_pos = predicted[i] == positive;
    const bool true_pos = truth[i] == positive;
    if (pred_pos && true_pos) ++c.tp;
    else if (pred_pos) ++c.fp;
    else if (true_pos) ++c.fn;
    else ++c.tn;
  }
  return c;
}

std::vector<std::size_t> predict_classes(const SentenceEncoder& encoder,
                                         std::span<const std::string> texts) {
  std::vector<std::size_t> out;
  if (texts.empty()) return out;
  out.reserve(texts.size());
  for (const auto& output : encoder.encode_texts(texts)) out.push_back(argmax(output.class_probs));
  return out;
}

BinaryResult evaluate_binary(const SentenceEncoder& encoder, const BinaryTestSet& set) {
  if (encoder.n_classes() != kNumCategories) {
    throw ContractViolation("evaluate_binary: encoder has " +
                            std::to_string(encoder.n_classes()) + " classes, taxonomy has " +
                            std::to_string(kNumCategories));
  }
  std::vector<std::string> texts;
  std::vector<std::size_t> truth;
  for (const auto* half : {&set.positives, &set.negatives}) {
    for (const auto& ex : *half) {
      texts.push_back(ex.text);
      truth.push_back(category_index(ex.label));
    }
  }
  const auto predicted = predict_classes(encoder, texts);
  BinaryResult result;
  result.confusion = binary_confusion(predicted, truth, category_index(set.positive));
  result.metrics = metrics_from_confusion(result.confusion);
  return result;
}

MetricsReport aggregate(std::span<const CategoryResult> results, RunMetadata metadata) {
  std::vector<const CategoryResult*> by_category(kNumInstructionCategories, nullptr);
  for (const auto& r : results) {
    if (!is_instruction(r.category)) {
      throw std::invalid_argument("aggregate: 'others' cannot be a positive category");
    }
    auto& slot = by_category[category_index(r.category)];
    if (slot != nullptr) {
      throw std::invalid_argument("aggregate: category '" +
                                  std::string(category_name(r.category)) + "' given twice");
    }
    slot = &r;
  }
  MetricsReport report;
  Confusion pooled;
  // Extended precision keeps the mean of identical values exact.
  long double accuracy_sum = 0.0L, f1_sum = 0.0L;
  for (Category c : instruction_categories()) {
    const CategoryResult* r = by_category[category_index(c)];
    if (r == nullptr) {
      throw std::invalid_argument("aggregate: missing metrics for category '" +
                                  std::string(category_name(c)) + "'");
    }
    report.per_category.push_back(*r);
    accuracy_sum += r->metrics.accuracy;
    f1_sum += r->metrics.f1;
    pooled += r->confusion;
  }
  report.macro_accuracy = static_cast<double>(accuracy_sum / kNumInstructionCategories);
  report.macro_f1 = static_cast<double>(f1_sum / kNumInstructionCategories);
  const BinaryMetrics micro = metrics_from_confusion(pooled);
  report.micro_accuracy = micro.accuracy;
  report.micro_f1 = micro.f1;
  report.metadata = std::move(metadata);
  return report;
}

MetricsReport evaluate_all(const SentenceEncoder& encoder,
                           std::span<const BinaryTestSet> sets, RunMetadata metadata) {
  std::vector<CategoryResult> results;
  for (const auto& set : sets) {
    const BinaryResult r = evaluate_binary(encoder, set);
    results.push_back(CategoryResult{set.positive, r.confusion, r.metrics});
  }
  return aggregate(results, std::move(metadata));
}

std::string MetricsReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["metadata"] = {{"model", metadata.model},
                     {"config_hash", metadata.config_hash},
                     {"seed", metadata.seed},
                     {"checkpoint_id", metadata.checkpoint_id}};
  nlohmann::ordered_json categories = nlohmann::ordered_json::object();
  for (const auto& r : per_category) {
    categories[std::string(category_name(r.category))] = {
        {"accuracy", r.metrics.accuracy},
        {"precision", r.metrics.precision},
        {"recall", r.metrics.recall},
        {"f1", r.metrics.f1},
        {"tp", r.confusion.tp},
        {"fp", r.confusion.fp},
        {"fn", r.confusion.fn},
        {"tn", r.confusion.tn},
    };
  }
  doc["per_category"] = std::move(categories);
  doc["macro_average"] = {{"accuracy", macro_accuracy}, {"f1", macro_f1}};
  doc["micro_average"] = {{"accuracy", micro_accuracy}, {"f1", micro_f1}};
  return doc.dump(2) + "\n";
}

std::string render_table(std::span<const std::pair<std::string, MetricsReport>> variants) {
  std::size_t model_width = 5;
  for (const auto& [name, _] : variants) model_width = std::max(model_width, name.size());

  std::ostringstream out;
  char line[256];
  const auto row = [&](const std::string& instruction, const std::string& model,
                       const std::string& acc, const std::string& f1) {
    std::snprintf(line, sizeof(line), "%-16s %-*s %9s %9s\n", instruction.c_str(),
                  static_cast<int>(model_width), model.c_str(), acc.c_str(), f1.c_str());
    out << line;
  };
  const auto number = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return std::string(buf);
  };
  const std::string rule(16 + 1 + model_width + 20, '-');

  row("Instruction", "Model", "Accuracy", "F1");
  out << rule << '\n';
  for (std::size_t c = 0; c < kNumInstructionCategories; ++c) {
    for (std::size_t v = 0; v < variants.size(); ++v) {
      const auto& [name, report] = variants[v];
      const auto& r = report.per_category.at(c);
      row(v == 0 ? std::string(category_name(r.category)) : "", name,
          number(r.metrics.accuracy), number(r.metrics.f1));
    }
    out << rule << '\n';
  }
  for (std::size_t v = 0; v < variants.size(); ++v) {
    const auto& [name, report] = variants[v];
    row(v == 0 ? "macro-average" : "", name, number(report.macro_accuracy),
        number(report.macro_f1));
  }
  out << rule << '\n';
  for (std::size_t v = 0; v < variants.size(); ++v) {
    const auto& [name, report] = variants[v];
    row(v == 0 ? "micro-average" : "", name, number(report.micro_accuracy),
        number(report.micro_f1));
  }
  return out.str();
}

double one_vs_rest_macro_f1(std::span<const std::size_t> predicted,
                            std::span<const std::size_t> truth) {
  double sum = 0.0;
  for (Category c : instruction_categories()) {
    sum += metrics_from_confusion(binary_confusion(predicted, truth, category_index(c))).f1;
  }
  return sum / kNumInstructionCategories;
}

}  // namespace dialogic
