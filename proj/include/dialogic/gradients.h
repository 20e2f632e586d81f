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

#ifndef DIALOGIC_GRADIENTS_H_
#define DIALOGIC_GRADIENTS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "dialogic/encoder.h"
#include "dialogic/mtl_loss.h"

namespace dialogic {

struct LossGradient {
  Parameters gradient;
  LossBreakdown loss;
};

// Partners' traces must come from the current parameters; the contrastive
// term is backpropagated into both sides of every pair.
LossGradient backpropagate_total_loss(const TinyReferenceEncoder& encoder,
                                      std::span<const ForwardTrace> anchors,
                                      std::span<const std::size_t> labels,
                                      std::span<const ForwardTrace> partners,
                                      std::span<const std::size_t> partner_labels,
                                      bool has_pairs, const LossConfig& config);

struct PairedBatch {
  std::span<const TokenSequence> sequences;
  std::span<const std::size_t> labels;
};

// Gradient of the total multi-task loss w.r.t. every encoder parameter.
// `pairs` may be null when the objective does not use them.
LossGradient parameter_gradients(const TinyReferenceEncoder& encoder,
                                 std::span<const TokenSequence> batch,
                                 std::span<const std::size_t> labels,
                                 const PairedBatch* pairs, const LossConfig& config);

// Gradient of the summed cross-entropy alone: a plain classifier's update.
Parameters cross_entropy_gradients(const TinyReferenceEncoder& encoder,
                                   std::span<const TokenSequence> batch,
                                   std::span<const std::size_t> labels);

}  // namespace dialogic

#endif  // DIALOGIC_GRADIENTS_H_
