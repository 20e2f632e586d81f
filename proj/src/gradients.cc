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

#include "dialogic/gradients.h"

#include "dialogic/errors.h"

namespace dialogic {
namespace {

// d(-log p_label)/d logits, scaled. Zero once the probability sits under the
// clamp, where the clamped loss is constant.
std::vector<double> cross_entropy_logit_gradient(const std::vector<double>& probs,
                                                 std::size_t label, double scale) {
  std::vector<double> grad(probs.size(), 0.0);
  if (probs[label] < kProbabilityFloor) return grad;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    grad[k] = scale * (probs[k] - (k == label ? 1.0 : 0.0));
  }
  return grad;
}

std::vector<ForwardTrace> forward_all(const TinyReferenceEncoder& encoder,
                                      std::span<const TokenSequence> batch) {
  std::vector<ForwardTrace> traces;
  traces.reserve(batch.size());
  for (const auto& seq : batch) traces.push_back(encoder.forward(seq));
  return traces;
}

}  // namespace

LossGradient backpropagate_total_loss(const TinyReferenceEncoder& encoder,
                                      std::span<const ForwardTrace> anchors,
                                      std::span<const std::size_t> labels,
                                      std::span<const ForwardTrace> partners,
                                      std::span<const std::size_t> partner_labels,
                                      bool has_pairs, const LossConfig& config) {
  std::vector<EncoderOutput> outputs;
  outputs.reserve(anchors.size());
  for (const auto& t : anchors) outputs.push_back(EncoderOutput{t.representation, t.probs});

  std::vector<std::vector<double>> partner_reps;
  PairedRepresentations paired;
  if (has_pairs) {
    if (partners.size() != anchors.size()) {
      throw ContractViolation("gradients: expected one partner trace per anchor");
    }
    partner_reps.reserve(partners.size());
    for (const auto& t : partners) partner_reps.push_back(t.representation);
    paired = PairedRepresentations{partner_reps, partner_labels};
  }

  LossGradient result{Parameters(encoder.config()), {}};
  result.loss = evaluate_loss(outputs, labels, has_pairs ? &paired : nullptr, config);

  const bool contrastive_on = config.uses_pairs();
  const double ce_scale = contrastive_on ? config.gamma : 1.0;
  const double con_scale = contrastive_on ? 1.0 - config.gamma : 0.0;

  for (std::size_t i = 0; i < anchors.size(); ++i) {
    std::vector<double> d_logits;
    if (ce_scale != 0.0) d_logits = cross_entropy_logit_gradient(anchors[i].probs, labels[i], ce_scale);

    std::vector<double> d_rep;
    if (con_scale != 0.0) {
      d_rep = contrastive_gradient(anchors[i].representation, partners[i].representation,
                                   config.margin);
      for (double& g : d_rep) g *= con_scale;
      std::vector<double> d_partner(d_rep.size());
      for (std::size_t j = 0; j < d_rep.size(); ++j) d_partner[j] = -d_rep[j];
      encoder.backward(partners[i], d_partner, {}, result.gradient);
    }
    encoder.backward(anchors[i], d_rep, d_logits, result.gradient);
  }

  if (!result.gradient.all_finite()) {
    throw NumericError(contrastive_on ? "contrastive" : "cross-entropy",
                       "gradient is not finite");
  }
  return result;
}

LossGradient parameter_gradients(const TinyReferenceEncoder& encoder,
                                 std::span<const TokenSequence> batch,
                                 std::span<const std::size_t> labels,
                                 const PairedBatch* pairs, const LossConfig& config) {
  const auto anchors = forward_all(encoder, batch);
  std::vector<ForwardTrace> partner_traces;
  std::span<const std::size_t> partner_labels;
  if (pairs != nullptr) {
    partner_traces = forward_all(encoder, pairs->sequences);
    partner_labels = pairs->labels;
  }
  return backpropagate_total_loss(encoder, anchors, labels, partner_traces, partner_labels,
                                  pairs != nullptr, config);
}

Parameters cross_entropy_gradients(const TinyReferenceEncoder& encoder,
                                   std::span<const TokenSequence> batch,
                                   std::span<const std::size_t> labels) {
  if (batch.size() != labels.size()) {
    throw ContractViolation("cross_entropy_gradients: batch and label counts differ");
  }
  Parameters gradient(encoder.config());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const ForwardTrace t = encoder.forward(batch[i]);
    const auto d_logits = cross_entropy_logit_gradient(t.probs, labels[i], 1.0);
    encoder.backward(t, {}, d_logits, gradient);
  }
  return gradient;
}

}  // namespace dialogic
