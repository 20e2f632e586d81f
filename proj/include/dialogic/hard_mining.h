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

#ifndef DIALOGIC_HARD_MINING_H_
#define DIALOGIC_HARD_MINING_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dialogic/mtl_loss.h"
#include "dialogic/rng.h"

namespace dialogic {

// Batch positions whose predicted class (argmax, lowest index on ties)
// differs from the true label.
std::vector<std::size_t> discover_hard(std::span<const std::size_t> labels,
                                       std::span<const std::vector<double>> probs);

// How long the hard set lives. kRolling keeps a bounded pool across steps;
// kPerBatch clears it on every update, so it holds only the latest batch's
// misclassified examples.
enum class PoolCadence { kRolling, kPerBatch };

std::string_view pool_cadence_name(PoolCadence cadence);
std::optional<PoolCadence> pool_cadence_from_name(std::string_view name);

// The latest prediction for one training example.
struct PoolObservation {
  std::string uid;
  std::size_t example_index = 0;
  std::size_t label = 0;
  bool misclassified = false;
  std::vector<double> representation;
};

struct PoolEntry {
  std::string uid;
  std::size_t example_index = 0;
  std::size_t label = 0;
  std::vector<double> representation;  // as of insertion; informational only
  std::size_t staleness = 0;           // updates since (re)insertion
  std::uint64_t sequence = 0;          // insertion order
};

class HardPool {
 public:
  explicit HardPool(std::size_t capacity, PoolCadence cadence = PoolCadence::kRolling);

  // Ages every entry, drops entries observed correct, (re)inserts entries
  // observed misclassified, then evicts the stalest (oldest on ties) until
  // the pool fits its capacity.
  void update(std::span<const PoolObservation> batch);
  void clear() { entries_.clear(); }

  // In insertion order.
  const std::vector<PoolEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  PoolCadence cadence() const { return cadence_; }
  bool contains(std::string_view uid) const;

 private:
  std::size_t capacity_;
  PoolCadence cadence_;
  std::vector<PoolEntry> entries_;
  std::uint64_t next_sequence_ = 0;
};

class DegenerateDatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The full training set grouped by label, for partners drawn outside the
// pool.
class TrainingIndex {
 public:
  TrainingIndex(std::vector<std::string> uids, std::vector<std::size_t> labels,
                std::size_t n_classes);

  std::size_t size() const { return labels_.size(); }
  const std::string& uid(std::size_t index) const { return uids_[index]; }
  std::size_t label(std::size_t index) const { return labels_[index]; }

  // Uniform over examples whose label differs from `anchor_label`. Throws
  // DegenerateDatasetError when there are none.
  std::size_t sample_other(std::size_t anchor_label, Rng& rng) const;

 private:
  std::vector<std::string> uids_;
  std::vector<std::size_t> labels_;
  std::vector<std::vector<std::size_t>> by_label_;
};

struct SamplingStats {
  std::size_t pool_hits = 0;
  std::size_t fallbacks = 0;
};

// For each anchor, a partner drawn uniformly from pool entries of a different
// label, or from the training index when the pool has none.
PairAssignment sample_partners(const HardPool& pool,
                               std::span<const std::size_t> anchor_labels,
                               const TrainingIndex& fallback, Rng& rng,
                               SamplingStats* stats = nullptr);

}  // namespace dialogic

#endif  // DIALOGIC_HARD_MINING_H_
