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

#include "dialogic/trainer.h"

#include <cmath>

#include "dialogic/errors.h"
#include "dialogic/evaluation.h"
#include "dialogic/gradients.h"

namespace dialogic {
namespace {

TrainingIndex make_index(std::span<const LabeledExample> examples, std::size_t n_classes) {
  std::vector<std::string> uids;
  std::vector<std::size_t> labels;
  uids.reserve(examples.size());
  labels.reserve(examples.size());
  for (const auto& ex : examples) {
    uids.push_back(ex.uid);
    labels.push_back(category_index(ex.label));
  }
  return TrainingIndex(std::move(uids), std::move(labels), n_classes);
}

nlohmann::ordered_json nullable(double value, bool present) {
  return present ? nlohmann::ordered_json(value) : nlohmann::ordered_json(nullptr);
}

double rate(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

void TrainConfig::validate() const {
  loss.validate();
  encoder.validate();
  if (batch_size == 0) throw ConfigError("train.batch_size", "must be positive");
  if (loss.pairing_mode != PairingMode::kNone && batch_size < 2) {
    throw ConfigError("train.batch_size", "must be at least 2 when pairing is enabled");
  }
  if (loss.pairing_mode == PairingMode::kNone && loss.gamma != 1.0) {
    throw ConfigError("train.gamma", "must be 1 when pairing_mode is none");
  }
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("train.learning_rate", "must be a nonnegative number");
  }
  if (pool_capacity == 0) throw ConfigError("train.pool_capacity", "must be positive");
}

nlohmann::ordered_json TrainConfig::to_json() const {
  return {
      {"gamma", loss.gamma},
      {"margin", loss.margin},
      {"pairing_mode", std::string(pairing_mode_name(loss.pairing_mode))},
      {"batch_size", batch_size},
      {"epochs", epochs},
      {"learning_rate", learning_rate},
      {"seed", rng_seed},
      {"early_stop_patience", early_stop_patience},
      {"pool_capacity", pool_capacity},
      {"pool_cadence", std::string(pool_cadence_name(pool_cadence))},
      {"encoder",
       {{"embed_dim", encoder.embed_dim},
        {"max_seq_len", encoder.max_seq_len},
        {"architecture", std::string(architecture_name(encoder.architecture))},
        {"seed", encoder.rng_seed}}},
  };
}

TrainingSet::TrainingSet(std::span<const LabeledExample> examples,
                         const TinyReferenceEncoder& encoder)
    : index_(make_index(examples, encoder.config().n_classes)) {
  sequences_.reserve(examples.size());
  labels_.reserve(examples.size());
  for (const auto& ex : examples) {
    sequences_.push_back(encoder.tokenize(ex.text));
    labels_.push_back(category_index(ex.label));
  }
}

TrainState TrainState::initial(const TrainConfig& config, TinyReferenceEncoder encoder) {
  return TrainState{std::move(encoder), HardPool(config.pool_capacity, config.pool_cadence),
                    Rng(derive_seed(config.rng_seed, 0))};
}

StepMetrics train_step(TrainState& state, std::span<const std::size_t> batch,
                       const TrainingSet& data, const TrainConfig& config) {
  if (batch.empty()) throw ContractViolation("train_step: empty batch");
  if (batch.size() > config.batch_size) {
    throw ContractViolation("train_step: batch larger than the configured batch size");
  }
  const TinyReferenceEncoder& encoder = state.encoder;

  std::vector<ForwardTrace> anchors;
  std::vector<std::size_t> labels;
  std::vector<std::vector<double>> probs;
  anchors.reserve(batch.size());
  for (std::size_t i : batch) {
    anchors.push_back(encoder.forward(data.sequence(i)));
    labels.push_back(data.label(i));
    probs.push_back(anchors.back().probs);
  }
  const std::vector<std::size_t> hard = discover_hard(labels, probs);

  StepMetrics metrics;
  metrics.batch_size = batch.size();
  metrics.n_hard = hard.size();

  const PairingMode mode = config.loss.pairing_mode;
  if (mode == PairingMode::kHard) {
    std::vector<PoolObservation> observations(batch.size());
    std::size_t next_hard = 0;
    for (std::size_t k = 0; k < batch.size(); ++k) {
      const bool missed = next_hard < hard.size() && hard[next_hard] == k;
      if (missed) ++next_hard;
      observations[k] = PoolObservation{data.uid(batch[k]), batch[k], labels[k], missed,
                                        anchors[k].representation};
    }
    state.pool.update(observations);
  }

  std::vector<ForwardTrace> partners;
  std::vector<std::size_t> partner_labels;
  const bool has_pairs = config.loss.uses_pairs();
  if (has_pairs) {
    // random-all is the hard sampler with a pool that never fills.
    static const HardPool kEmptyPool(1);
    const HardPool& pool = mode == PairingMode::kHard ? state.pool : kEmptyPool;
    SamplingStats stats;
    const PairAssignment pairs = sample_partners(pool, labels, data.index(), state.rng, &stats);
    metrics.pool_hits = stats.pool_hits;
    metrics.fallbacks = stats.fallbacks;
    partners.reserve(pairs.partners.size());
    for (const auto& partner : pairs.partners) {
      partners.push_back(encoder.forward(data.sequence(partner.example_index)));
      partner_labels.push_back(partner.label);
    }
  }
  metrics.pool_size = state.pool.size();

  LossGradient step;
  try {
    step = backpropagate_total_loss(encoder, anchors, labels, partners, partner_labels,
                                    has_pairs, config.loss);
  } catch (const NumericError& e) {
    std::string uids;
    for (std::size_t i : batch) uids += (uids.empty() ? "" : ", ") + data.uid(i);
    throw TrainingError("non-finite " + e.term() + " loss at step " +
                        std::to_string(state.step) + " on batch [" + uids + "]: " + e.what());
  }

  metrics.ce_loss = step.loss.cross_entropy;
  metrics.contrastive_loss = step.loss.contrastive;
  metrics.total_loss = step.loss.total;

  state.encoder.mutable_parameters().add_scaled(-config.learning_rate, step.gradient);
  ++state.step;
  return metrics;
}

TrainResult train(const TrainConfig& config, std::span<const LabeledExample> dataset,
                  const nlohmann::ordered_json& run_metadata) {
  config.validate();
  const auto train_split = filter_split(dataset, Split::kTrain);
  const auto val_split = filter_split(dataset, Split::kValidation);
  if (train_split.empty()) throw ConfigError("dataset", "train split is empty");
  if (val_split.empty()) throw ConfigError("dataset", "validation split is empty");

  std::vector<std::string> train_texts;
  for (const auto& ex : train_split) train_texts.push_back(ex.text);
  TinyReferenceEncoder initial =
      TinyReferenceEncoder::initialize(config.encoder, Vocabulary::from_texts(train_texts));

  const TrainingSet data(train_split, initial);
  std::vector<TokenSequence> val_sequences;
  std::vector<std::size_t> val_labels;
  for (const auto& ex : val_split) {
    val_sequences.push_back(initial.tokenize(ex.text));
    val_labels.push_back(category_index(ex.label));
  }

  TrainResult result{initial, -std::numeric_limits<double>::infinity(), 0, {}, {}};
  TrainState state = TrainState::initial(config, std::move(initial));

  nlohmann::ordered_json run = {{"event", "run"}};
  for (const auto& [key, value] : run_metadata.items()) run[key] = value;
  run["train"] = config.to_json();
  run["vocab_size"] = state.encoder.config().vocab_size;
  run["n_train"] = train_split.size();
  run["n_validation"] = val_split.size();
  result.log_lines.push_back(run.dump());

  const bool pairs = config.loss.uses_pairs();
  std::size_t since_improvement = 0;
  std::vector<std::size_t> order(data.size());

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    state.epoch = epoch;
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    state.rng.shuffle(order);

    EpochRecord record;
    record.epoch = epoch;
    std::size_t hits = 0;
    std::size_t fallbacks = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const std::span<const std::size_t> batch(order.data() + start, end - start);
      const StepMetrics m = train_step(state, batch, data, config);
      record.ce_loss += m.ce_loss;
      record.contrastive_loss += m.contrastive_loss;
      record.total_loss += m.total_loss;
      hits += m.pool_hits;
      fallbacks += m.fallbacks;

      nlohmann::ordered_json line = {
          {"event", "step"},
          {"epoch", epoch},
          {"step", state.step},
          {"ce_loss", m.ce_loss},
          {"contrastive_loss", m.contrastive_loss},
          {"total_loss", m.total_loss},
          {"pool_size", m.pool_size},
          {"fallback_rate", nullable(rate(m.fallbacks, m.pool_hits + m.fallbacks), pairs)},
          {"val_macro_f1", nullptr},
      };
      result.log_lines.push_back(line.dump());
    }

    std::vector<std::size_t> predicted;
    predicted.reserve(val_sequences.size());
    for (const auto& out : state.encoder.encode(val_sequences)) {
      predicted.push_back(argmax(out.class_probs));
    }
    record.val_macro_f1 = one_vs_rest_macro_f1(predicted, val_labels);
    record.pool_size = state.pool.size();
    record.pool_hit_rate = rate(hits, hits + fallbacks);
    record.fallback_rate = rate(fallbacks, hits + fallbacks);
    result.epochs.push_back(record);

    if (record.val_macro_f1 > state.best_val_macro_f1) {
      state.best_val_macro_f1 = record.val_macro_f1;
      result.best = state.encoder;
      result.best_val_macro_f1 = record.val_macro_f1;
      result.best_epoch = epoch;
      since_improvement = 0;
    } else {
      ++since_improvement;
    }

    nlohmann::ordered_json line = {
        {"event", "epoch"},
        {"epoch", epoch},
        {"step", state.step},
        {"ce_loss", record.ce_loss},
        {"contrastive_loss", record.contrastive_loss},
        {"total_loss", record.total_loss},
        {"pool_size", record.pool_size},
        {"fallback_rate", nullable(record.fallback_rate, pairs)},
        {"pool_hit_rate", nullable(record.pool_hit_rate, pairs)},
        {"val_macro_f1", record.val_macro_f1},
        {"best_val_macro_f1", state.best_val_macro_f1},
    };
    result.log_lines.push_back(line.dump());

    if (config.early_stop_patience > 0 && since_improvement >= config.early_stop_patience) {
      break;
    }
  }
  return result;
}

}  // namespace dialogic
