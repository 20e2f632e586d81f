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

#ifndef DIALOGIC_NOISE_H_
#define DIALOGIC_NOISE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dialogic/errors.h"
#include "dialogic/rng.h"

namespace dialogic {

// Simulated ASR corruption. The expected number of character edits per
// clean character equals target_cer; the edit type is drawn per event from
// the substitution/deletion/insertion weights.
struct NoiseSpec {
  double target_cer = 0.0;
  double substitution_weight = 0.6;
  double deletion_weight = 0.2;
  double insertion_weight = 0.2;
  std::uint64_t rng_seed = 0;

  // Throws ConfigError naming the offending field ("noise.target_cer", ...).
  void validate() const;
};

// Corrupts `text` drawing replacement and inserted characters uniformly from
// `inventory`. Never returns an empty string for a non-empty input.
std::u32string apply_asr_noise(std::u32string_view text, const NoiseSpec& noise,
                               std::span<const char32_t> inventory, Rng& rng);

// Convenience form: seeds from noise.rng_seed and uses the text's own
// characters as the inventory. `text` must be non-empty.
std::string apply_asr_noise(std::string_view text, const NoiseSpec& noise);

// Character-level Levenshtein distance.
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);

// Sum of edit distances divided by the summed length of the clean texts.
double character_error_rate(std::span<const std::string> clean,
                            std::span<const std::string> noisy);

// Sorted distinct code points over all texts.
std::vector<char32_t> character_inventory(std::span<const std::string> texts);

}  // namespace dialogic

#endif  // DIALOGIC_NOISE_H_
