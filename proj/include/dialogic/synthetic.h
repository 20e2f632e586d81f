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

#ifndef DIALOGIC_SYNTHETIC_H_
#define DIALOGIC_SYNTHETIC_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dialogic/corpus.h"
#include "dialogic/noise.h"
#include "dialogic/rng.h"
#include "dialogic/taxonomy.h"

namespace dialogic {

// Per-category utterance templates, indexed by category id. A template is
// literal text with optional alternation groups: "{早上|下午}好" expands to
// "早上好" or "下午好", one alternative per group chosen uniformly.
using TemplateSet = std::array<std::vector<std::string>, kNumCategories>;

// Classroom-style Mandarin templates. Categories share much of their
// vocabulary (我们, 大家, 这道题, 一下, ...) so that classes are confusable.
TemplateSet builtin_templates();

// Throws ConfigError on an unbalanced or nested alternation group.
std::string instantiate_template(std::string_view pattern, Rng& rng);

struct SplitFractions {
  double train = 0.7;
  double validation = 0.15;
  double test = 0.15;

  void validate() const;
};

struct SyntheticCorpus {
  std::vector<LabeledExample> examples;
  // Template instantiations before noise, aligned with `examples`.
  std::vector<std::string> clean_texts;

  double realized_cer() const;
};

// Exactly n_per_class examples per category, split per category by
// `splits`. Template choice and split assignment draw from rng_seed; noise
// draws from noise.rng_seed. Substitutions and insertions use the character
// inventory of the clean corpus.
SyntheticCorpus generate_synthetic_corpus(std::size_t n_per_class,
                                          const TemplateSet& templates,
                                          const NoiseSpec& noise,
                                          std::uint64_t rng_seed,
                                          const SplitFractions& splits = {});

}  // namespace dialogic

#endif  // DIALOGIC_SYNTHETIC_H_
