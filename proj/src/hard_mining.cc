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

#include "dialogic/hard_mining.h"

#include <algorithm>

#include "dialogic/encoder.h"
#include "dialogic/errors.h"

namespace dialogic {

std::vector<std::size_t> discover_hard(std::span<const std::size_t> labels,
                                       std::span<const std::vector<double>> probs) {
  if (labels.size() != probs.size()) {
    throw ContractViolation("discover_hard: labels and predictions are not aligned");
  }
  std::vector<std::size_t> hard;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (argmax(probs[i]) != labels[i]) hard.push_back(i);
  }
  return hard;
}

std::string_view pool_cadence_name(PoolCadence cadence) {
  return cadence == PoolCadence::kRolling ? "rolling" : "per-batch";
}

std::optional<PoolCadence> pool_cadence_from_name(std::string_view name) {
  if (name == "rolling") return PoolCadence::kRolling;
  if (name == "per-batch") return PoolCadence::kPerBatch;
  return std::nullopt;
}

HardPool::HardPool(std::size_t capacity, PoolCadence cadence)
    : capacity_(capacity), cadence_(cadence) {
  if (capacity == 0) throw ConfigError("train.pool_capacity", "must be positive");
}

bool HardPool::contains(std::string_view uid) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const PoolEntry& e) { return e.uid == uid; });
}

void HardPool::update(std::span<const PoolObservation> batch) {
  if (cadence_ == PoolCadence::kPerBatch) entries_.clear();
  for (auto& entry : entries_) ++entry.staleness;

  for (const auto& obs : batch) {
    auto it = std::find_if(entries_.begin(), entries_.end(),
                           [&](const PoolEntry& e) { return e.uid == obs.uid; });
    if (it != entries_.end()) entries_.erase(it);
    if (!obs.misclassified) continue;
    entries_.push_back(PoolEntry{obs.uid, obs.example_index, obs.label, obs.representation, 0,
                                 next_sequence_++});
  }

  while (entries_.size() > capacity_) {
    // First maximum in insertion order is the oldest among the stalest.
    auto victim = std::max_element(
        entries_.begin(), entries_.end(),
        [](const PoolEntry& a, const PoolEntry& b) { return a.staleness < b.staleness; });
    entries_.erase(victim);
  }
}

TrainingIndex::TrainingIndex(std::vector<std::string> uids, std::vector<std::size_t> labels,
                             std::size_t n_classes)
    : uids_(std::move(uids)), labels_(std::move(labels)), by_label_(n_classes) {
  if (uids_.size() != labels_.size()) {
    throw ContractViolation("TrainingIndex: uids and labels are not aligned");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] >= n_classes) {
      throw ContractViolation("TrainingIndex: label out of range");
    }
    by_label_[labels_[i]].push_back(i);
  }
}

std::size_t TrainingIndex::sample_other(std::size_t anchor_label, Rng& rng) const {
  const std::size_t own = anchor_label < by_label_.size() ? by_label_[anchor_label].size() : 0;
  const std::size_t others = labels_.size() - own;
  if (others == 0) {
    throw DegenerateDatasetError(
        "no training example has a label other than " + std::to_string(anchor_label) +
        "; contrastive pairs need at least two classes");
  }
  std::size_t k = rng.uniform_index(others);
  for (std::size_t label = 0; label < by_label_.size(); ++label) {
    if (label == anchor_label) continue;
    if (k < by_label_[label].size()) return by_label_[label][k];
    k -= by_label_[label].size();
  }
  throw std::logic_error("TrainingIndex::sample_other: unreachable");
}

PairAssignment sample_partners(const HardPool& pool,
                               std::span<const std::size_t> anchor_labels,
                               const TrainingIndex& fallback, Rng& rng,
                               SamplingStats* stats) {
  if (anchor_labels.empty()) throw ContractViolation("sample_partners: no anchors");
  PairAssignment out;
  out.partners.reserve(anchor_labels.size());
  std::vector<const PoolEntry*> eligible;
  for (std::size_t anchor_label : anchor_labels) {
    eligible.clear();
    for (const auto& entry : pool.entries()) {
      if (entry.label != anchor_label) eligible.push_back(&entry);
    }
    if (!eligible.empty()) {
      const PoolEntry& pick = *eligible[rng.uniform_index(eligible.size())];
      out.partners.push_back(Partner{pick.example_index, pick.uid, pick.label, true});
      if (stats) ++stats->pool_hits;
    } else {
      const std::size_t index = fallback.sample_other(anchor_label, rng);
      out.partners.push_back(Partner{index, fallback.uid(index), fallback.label(index), false});
      if (stats) ++stats->fallbacks;
    }
  }
  return out;
}

}  // namespace dialogic
