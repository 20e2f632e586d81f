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

#ifndef DIALOGIC_EVALUATION_H_
#define DIALOGIC_EVALUATION_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dialogic/corpus.h"
#include "dialogic/encoder.h"
#include "dialogic/taxonomy.h"

namespace dialogic {

// One instruction category against everything else, with equal halves.
struct BinaryTestSet {
  Category positive = Category::kGreeting;
  std::vector<LabeledExample> positives;
  std::vector<LabeledExample> negatives;
};

class SizingError : public std::runtime_error {
 public:
  SizingError(Category category, std::size_t shortfall, const std::string& message)
      : std::runtime_error(message), category_(category), shortfall_(shortfall) {}

  Category category() const { return category_; }
  std::size_t shortfall() const { return shortfall_; }

 private:
  Category category_;
  std::size_t shortfall_;
};

// One set per instruction category ("others" is never positive). Positives
// and negatives are drawn uniformly without replacement; each category uses
// its own stream derived from `seed`.
std::vector<BinaryTestSet> build_binary_sets(std::span<const LabeledExample> test_pool,
                                             std::size_t n_per_side, std::uint64_t seed);

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  Confusion& operator+=(const Confusion& other);
  bool operator==(const Confusion&) const = default;
};

struct BinaryMetrics {
  double accuracy = 0.0;
  double precision = 0.0;  // 0 when nothing is predicted positive
  double recall = 0.0;     // 0 when there are no positives
  double f1 = 0.0;         // 0 when precision + recall is 0
};

BinaryMetrics metrics_from_confusion(const Confusion& confusion);

// Tallies predictions against the truth, treating `positive` as the positive
// class and every other class as negative.
Confusion binary_confusion(std::span<const std::size_t> predicted,
                           std::span<const std::size_t> truth, std::size_t positive);

struct BinaryResult {
  Confusion confusion;
  BinaryMetrics metrics;
};

// An example is predicted positive iff the encoder's argmax class is the
// set's positive category.
BinaryResult evaluate_binary(const SentenceEncoder& encoder, const BinaryTestSet& set);

struct CategoryResult {
  Category category = Category::kGreeting;
  Confusion confusion;
  BinaryMetrics metrics;
};

struct RunMetadata {
  std::string model;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string checkpoint_id;
};

struct MetricsReport {
  std::vector<CategoryResult> per_category;  // the 8 instruction categories, id order
  double macro_accuracy = 0.0;
  double macro_f1 = 0.0;
  double micro_accuracy = 0.0;
  double micro_f1 = 0.0;
  RunMetadata metadata;

  std::string to_json() const;
};

// Macro values are unweighted means over the 8 categories; micro values come
// from the confusion counts summed over the 8 binary tasks. Throws
// std::invalid_argument when a category is missing or repeated.
MetricsReport aggregate(std::span<const CategoryResult> results, RunMetadata metadata = {});

// Evaluates every set and aggregates.
MetricsReport evaluate_all(const SentenceEncoder& encoder,
                           std::span<const BinaryTestSet> sets, RunMetadata metadata = {});

// Plain-text table: one block of rows per category (and macro/micro
// averages), one row per model variant, Accuracy and F1 columns.
std::string render_table(std::span<const std::pair<std::string, MetricsReport>> variants);

// Mean over the 8 instruction categories of one-vs-rest F1 on a multi-class
// labelled set. Used for validation-time model selection.
double one_vs_rest_macro_f1(std::span<const std::size_t> predicted,
                            std::span<const std::size_t> truth);

// argmax class of every text, in order.
std::vector<std::size_t> predict_classes(const SentenceEncoder& encoder,
                                         std::span<const std::string> texts);

}  // namespace dialogic

#endif  // DIALOGIC_EVALUATION_H_
