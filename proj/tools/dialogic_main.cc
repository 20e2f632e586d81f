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

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dialogic/experiment.h"

int main(int argc, char** argv) {
  CLI::App app{"Dialogic instruction detection: synthesize, train, evaluate"};
  app.require_subcommand(1);

  std::string config_path;
  std::string mode_name = "hard";
  std::string checkpoint_path;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic noisy corpus");
  synth->add_option("--config", config_path, "Experiment config (JSON)")->required();

  auto* train = app.add_subcommand("train", "Train one ablation variant");
  train->add_option("--config", config_path, "Experiment config (JSON)")->required();
  train->add_option("--mode", mode_name, "baseline | all | hard")
      ->check(CLI::IsMember({"baseline", "all", "hard"}));

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on the binary test sets");
  eval->add_option("--checkpoint", checkpoint_path, "Checkpoint file")->required();
  eval->add_option("--config", config_path, "Experiment config (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      const auto summary = dialogic::cmd_synth(config_path);
      std::cout << "train=" << summary.n_train << " validation=" << summary.n_validation
                << " test=" << summary.n_test << " realized_cer=" << summary.realized_cer
                << "\n";
    } else if (*train) {
      const auto mode = *dialogic::train_mode_from_name(mode_name);
      const auto result = dialogic::cmd_train(config_path, mode);
      std::cout << "mode=" << mode_name << " epochs=" << result.epochs.size()
                << " best_epoch=" << result.best_epoch
                << " best_val_macro_f1=" << result.best_val_macro_f1 << "\n";
    } else if (*eval) {
      const auto out = dialogic::cmd_eval(checkpoint_path, config_path);
      std::cout << out.table;
      std::cout << "report: " << out.report_path.string() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
