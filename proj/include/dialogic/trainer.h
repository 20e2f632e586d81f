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

#ifndef DIALOGIC_TRAINER_H_
#define DIALOGIC_TRAINER_H_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dialogic/corpus.h"
#include "dialogic/encoder.h"
#include "dialogic/hard_mining.h"
#include "dialogic/mtl_loss.h"
#include "dialogic/rng.h"
#include "json.hpp"

namespace dialogic {

struct TrainConfig {
  LossConfig loss;
  EncoderConfig encoder;
  std::size_t batch_size = 32;
  std::size_t epochs = 20;
  double learning_rate = 0.05;
  std::uint64_t rng_seed = 0;
  // Epochs without a strict validation improvement before stopping; 0 turns
  // early stopping off.
  std::size_t early_stop_patience = 5;
  std::size_t pool_capacity = 512;
  PoolCadence pool_cadence = PoolCadence::kRolling;

  // Throws ConfigError with a "train."-prefixed field path.
  void validate() const;
  nlohmann::ordered_json to_json() const;
};

// Tokenized training examples in dataset order.
class TrainingSet {
 public:
  TrainingSet(std::span<const LabeledExample> examples, const TinyReferenceEncoder& encoder);

  std::size_t size() const { return sequences_.size(); }
  const TokenSequence& sequence(std::size_t i) const { return sequences_[i]; }
  std::size_t label(std::size_t i) const { return labels_[i]; }
  const std::string& uid(std::size_t i) const { return index_.uid(i); }
  const TrainingIndex& index() const { return index_; }

 private:
  std::vector<TokenSequence> sequences_;
  std::vector<std::size_t> labels_;
  TrainingIndex index_;
};

struct TrainState {
  TinyReferenceEncoder encoder;
  HardPool pool;
  Rng rng;
  std::size_t epoch = 0;
  std::size_t step = 0;
  double best_val_macro_f1 = -std::numeric_limits<double>::infinity();

  static TrainState initial(const TrainConfig& config, TinyReferenceEncoder encoder);
};

struct StepMetrics {
  double ce_loss = 0.0;           // unweighted summed cross-entropy
  double contrastive_loss = 0.0;  // unweighted summed contrastive term
  double total_loss = 0.0;
  std::size_t batch_size = 0;
  std::size_t n_hard = 0;  // misclassified anchors in this batch
  std::size_t pool_size = 0;
  std::size_t pool_hits = 0;
  std::size_t fallbacks = 0;
};

// Raised when a step's loss or gradient is not finite.
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One SGD step on the examples at `batch` (indices into `data`): forward the
// anchors, refresh the hard pool from their predictions (hard mode), assign
// partners, forward the partners with the current parameters, and apply
// -learning_rate times the total-loss gradient.
StepMetrics train_step(TrainState& state, std::span<const std::size_t> batch,
                       const TrainingSet& data, const TrainConfig& config);

struct EpochRecord {
  std::size_t epoch = 0;
  double ce_loss = 0.0;
  double contrastive_loss = 0.0;
  double total_loss = 0.0;
  std::size_t pool_size = 0;
  double pool_hit_rate = 0.0;
  double fallback_rate = 0.0;
  double val_macro_f1 = 0.0;
};

struct TrainResult {
  TinyReferenceEncoder best;
  double best_val_macro_f1 = -std::numeric_limits<double>::infinity();
  std::size_t best_epoch = 0;  // 0: the initialized encoder
  std::vector<EpochRecord> epochs;
  std::vector<std::string> log_lines;  // JSON lines
};

// Full training run over the train split with per-epoch validation. The
// vocabulary is built from the train split. `run_metadata` is copied into
// the log's leading "run" record.
TrainResult train(const TrainConfig& config, std::span<const LabeledExample> dataset,
                  const nlohmann::ordered_json& run_metadata = {});

}  // namespace dialogic

#endif  // DIALOGIC_TRAINER_H_
