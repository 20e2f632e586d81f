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

#include "dialogic/mtl_loss.h"

#include <cmath>

#include "dialogic/errors.h"

namespace dialogic {

std::string_view pairing_mode_name(PairingMode mode) {
  switch (mode) {
    case PairingMode::kNone: return "none";
    case PairingMode::kRandomAll: return "random-all";
    case PairingMode::kHard: return "hard";
  }
  return "none";
}

std::optional<PairingMode> pairing_mode_from_name(std::string_view name) {
  if (name == "none") return PairingMode::kNone;
  if (name == "random-all") return PairingMode::kRandomAll;
  if (name == "hard") return PairingMode::kHard;
  return std::nullopt;
}

void LossConfig::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("train.gamma", "must lie in [0, 1]");
  if (!(margin > 0.0) || !std::isfinite(margin)) {
    throw ConfigError("train.margin", "must be positive");
  }
}

void validate_pairs(std::span<const std::size_t> anchor_labels,
                    std::span<const std::size_t> partner_labels) {
  if (anchor_labels.size() != partner_labels.size()) {
    throw ContractViolation("pairing: expected one partner per anchor");
  }
  for (std::size_t i = 0; i < anchor_labels.size(); ++i) {
    if (anchor_labels[i] == partner_labels[i]) {
      throw ContractViolation("pairing: anchor " + std::to_string(i) +
                              " is paired with a partner of the same label " +
                              std::to_string(anchor_labels[i]));
    }
  }
}

double cross_entropy_term(std::span<const double> probs, std::size_t label) {
  if (label >= probs.size()) {
    throw ContractViolation("cross_entropy: label " + std::to_string(label) + " out of range");
  }
  double sum = 0.0;
  for (double p : probs) sum += p;
  if (!std::isfinite(sum)) {
    throw NumericError("cross-entropy", "class probabilities are not finite");
  }
  if (std::abs(sum - 1.0) > 1e-4) {
    throw ContractViolation("cross_entropy: probabilities sum to " + std::to_string(sum));
  }
  return -std::log(std::max(probs[label], kProbabilityFloor));
}

double cross_entropy(std::span<const std::vector<double>> class_probs,
                     std::span<const std::size_t> labels) {
  if (class_probs.size() != labels.size()) {
    throw ContractViolation("cross_entropy: batch and label counts differ");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    sum += cross_entropy_term(class_probs[i], labels[i]);
  }
  return sum;
}

namespace {

double distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ContractViolation("contrastive: dimension mismatch (" + std::to_string(a.size()) +
                            " vs " + std::to_string(b.size()) + ")");
  }
  double sq = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = a[j] - b[j];
    sq += diff * diff;
  }
  return std::sqrt(sq);
}

}  // namespace

double contrastive(std::span<const double> a, std::span<const double> b, double margin) {
  if (!(margin > 0.0)) throw ContractViolation("contrastive: margin must be positive");
  const double gap = margin - distance(a, b);
  return gap > 0.0 ? gap * gap : 0.0;
}

std::vector<double> contrastive_gradient(std::span<const double> a,
                                         std::span<const double> b, double margin) {
  const double d = distance(a, b);
  std::vector<double> grad(a.size(), 0.0);
  if (d >= margin || d == 0.0) return grad;
  const double coeff = -2.0 * (margin - d) / d;
  for (std::size_t j = 0; j < a.size(); ++j) grad[j] = coeff * (a[j] - b[j]);
  return grad;
}

LossBreakdown evaluate_loss(std::span<const EncoderOutput> outputs,
                            std::span<const std::size_t> labels,
                            const PairedRepresentations* pairs,
                            const LossConfig& config) {
  config.validate();
  if (outputs.size() != labels.size()) {
    throw ContractViolation("total_loss: batch and label counts differ");
  }
  if (pairs != nullptr) {
    validate_pairs(labels, pairs->labels);
    if (pairs->representations.size() != outputs.size()) {
      throw ContractViolation("total_loss: expected one partner representation per anchor");
    }
  } else if (config.uses_pairs()) {
    throw ConfigError("train.pairing_mode",
                      "contrastive term enabled but no pair assignment was given");
  }

  LossBreakdown out;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    out.cross_entropy += cross_entropy_term(outputs[i].class_probs, labels[i]);
  }
  if (!std::isfinite(out.cross_entropy)) {
    throw NumericError("cross-entropy", "cross-entropy term is not finite");
  }
  if (pairs != nullptr) {
    for (std::size_t i = 0; i < outputs.size(); ++i) {
      out.contrastive += contrastive(outputs[i].representation, pairs->representations[i],
                                     config.margin);
    }
    if (!std::isfinite(out.contrastive)) {
      throw NumericError("contrastive", "contrastive term is not finite");
    }
  }

  if (!config.uses_pairs()) {
    out.total = out.cross_entropy;
  } else if (config.gamma == 0.0) {
    out.total = out.contrastive;
  } else {
    out.total = config.gamma * out.cross_entropy + (1.0 - config.gamma) * out.contrastive;
  }
  return out;
}

double total_loss(std::span<const EncoderOutput> outputs,
                  std::span<const std::size_t> labels,
                  const PairedRepresentations* pairs, const LossConfig& config) {
  return evaluate_loss(outputs, labels, pairs, config).total;
}

}  // namespace dialogic
