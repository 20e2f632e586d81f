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

#ifndef DIALOGIC_EXPERIMENT_H_
#define DIALOGIC_EXPERIMENT_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "dialogic/evaluation.h"
#include "dialogic/noise.h"
#include "dialogic/synthetic.h"
#include "dialogic/trainer.h"
#include "json.hpp"

namespace dialogic {

// Environment variable that overrides the configured output directory.
inline constexpr const char* kOutputDirEnv = "DIALOGIC_OUTPUT_DIR";

struct CorpusSection {
  std::size_t n_per_class = 300;
  // "builtin", a template file path, or "inline".
  std::string templates_source = "builtin";
  TemplateSet templates = builtin_templates();
  NoiseSpec noise{0.1136, 0.6, 0.2, 0.2, 7};
  std::uint64_t seed = 1;
  SplitFractions splits;
};

struct EvalSection {
  std::size_t n_per_side = 40;
  std::uint64_t seed = 1;
};

// A single JSON document:
//   {"output_dir": "...",
//    "corpus": {"n_per_class", "templates", "noise": {"target_cer",
//               "substitution", "deletion", "insertion", "seed"}, "seed",
//               "splits": {"train", "validation", "test"}},
//    "encoder": {"embed_dim", "max_seq_len", "architecture", "seed"},
//    "train": {"gamma", "margin", "pairing_mode", "batch_size", "epochs",
//              "learning_rate", "seed", "early_stop_patience",
//              "pool_capacity", "pool_cadence"},
//    "eval": {"n_per_side", "seed"}}
// Every field is optional and defaults as in the section structs. Unknown
// keys and ill-typed values raise ConfigError naming the field path.
struct ExperimentConfig {
  CorpusSection corpus;
  TrainConfig train;
  EvalSection eval;
  std::filesystem::path output_dir = "out";

  // Fully resolved configuration, defaults included.
  nlohmann::ordered_json to_json() const;
  // Hex FNV-1a of to_json().dump().
  std::string hash() const;
};

// Relative paths resolve against `base_dir`.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc,
                                         const std::filesystem::path& base_dir);

// Applies the output-directory environment override.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// The three ablation presets.
enum class TrainMode { kBaseline, kAll, kHard };

std::string_view train_mode_name(TrainMode mode);
std::optional<TrainMode> train_mode_from_name(std::string_view name);

// baseline: pairing none, gamma 1. all: random-all pairing. hard: hard
// pairing. all and hard keep the configured gamma, which must be below 1.
TrainConfig apply_mode(TrainConfig config, TrainMode mode);

std::filesystem::path data_dir(const ExperimentConfig& config);
std::filesystem::path run_dir(const ExperimentConfig& config, TrainMode mode);

struct SynthSummary {
  double realized_cer = 0.0;
  std::size_t n_train = 0;
  std::size_t n_validation = 0;
  std::size_t n_test = 0;
};

// Writes data/{train,validation,test}.jsonl and data/manifest.json under the
// output directory.
SynthSummary cmd_synth(const std::filesystem::path& config_path);

// Trains with the mode preset on the synthesized data; writes
// runs/<mode>/checkpoint.json and runs/<mode>/train_log.jsonl.
TrainResult cmd_train(const std::filesystem::path& config_path, TrainMode mode);

struct EvalOutput {
  MetricsReport report;
  std::string table;
  std::filesystem::path report_path;
};

// Evaluates a checkpoint on binary sets built from data/test.jsonl; writes
// eval/<run>/metrics.json and eval/<run>/table.txt, where <run> is the
// checkpoint's directory name.
EvalOutput cmd_eval(const std::filesystem::path& checkpoint_path,
                    const std::filesystem::path& config_path);

}  // namespace dialogic

#endif  // DIALOGIC_EXPERIMENT_H_
