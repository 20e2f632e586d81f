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

#ifndef DIALOGIC_MTL_LOSS_H_
#define DIALOGIC_MTL_LOSS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dialogic/encoder.h"

namespace dialogic {

enum class PairingMode { kNone, kRandomAll, kHard };

std::string_view pairing_mode_name(PairingMode mode);
std::optional<PairingMode> pairing_mode_from_name(std::string_view name);

struct LossConfig {
  double gamma = 0.5;   // weight of the cross-entropy term
  double margin = 1.0;  // contrastive margin
  PairingMode pairing_mode = PairingMode::kHard;

  // Throws ConfigError with a "train."-prefixed field path.
  void validate() const;

  // True when the contrastive term takes part in the objective.
  bool uses_pairs() const { return pairing_mode != PairingMode::kNone && gamma < 1.0; }
};

// Probabilities are clamped from below before the log.
inline constexpr double kProbabilityFloor = 1e-12;

// The cross-label partner of one anchor.
struct Partner {
  std::size_t example_index = 0;  // position in the training set
  std::string uid;
  std::size_t label = 0;
  bool from_pool = false;  // false: drawn from the full training set
};

// One partner per anchor, aligned with the anchor batch.
struct PairAssignment {
  std::vector<Partner> partners;
};

// Throws ContractViolation on a size mismatch or a same-label pair.
void validate_pairs(std::span<const std::size_t> anchor_labels,
                    std::span<const std::size_t> partner_labels);

// -log(max(p[label], floor)). Throws ContractViolation when `probs` is not
// normalized within 1e-4 or the label is out of range, NumericError when the
// probabilities are not finite.
double cross_entropy_term(std::span<const double> probs, std::size_t label);

// Sum over the batch of cross_entropy_term.
double cross_entropy(std::span<const std::vector<double>> class_probs,
                     std::span<const std::size_t> labels);

// (max{0, margin - ||a - b||_2})^2.
double contrastive(std::span<const double> a, std::span<const double> b, double margin);

// d contrastive / d a; the gradient w.r.t. b is its negation. Zero in the
// hinge's flat region and, as a subgradient, at a == b.
std::vector<double> contrastive_gradient(std::span<const double> a,
                                         std::span<const double> b, double margin);

// Current-parameter partner representations with their labels, aligned with
// the anchors.
struct PairedRepresentations {
  std::span<const std::vector<double>> representations;
  std::span<const std::size_t> labels;
};

// Raw (unweighted) terms and their combination.
struct LossBreakdown {
  double cross_entropy = 0.0;
  double contrastive = 0.0;
  double total = 0.0;
};

// total = gamma * CE + (1 - gamma) * sum_i contrastive(rep_i, partner_i).
// With gamma == 1 or pairing_mode == none the total is CE exactly; with
// gamma == 0 it is the contrastive sum exactly. Throws ConfigError when the
// objective needs pairs and none are given, ContractViolation on invalid
// pairs, NumericError when a term is not finite.
LossBreakdown evaluate_loss(std::span<const EncoderOutput> outputs,
                            std::span<const std::size_t> labels,
                            const PairedRepresentations* pairs,
                            const LossConfig& config);

double total_loss(std::span<const EncoderOutput> outputs,
                  std::span<const std::size_t> labels,
                  const PairedRepresentations* pairs, const LossConfig& config);

}  // namespace dialogic

#endif  // DIALOGIC_MTL_LOSS_H_
