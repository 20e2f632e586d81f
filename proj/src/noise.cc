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

#include "dialogic/noise.h"

#include <algorithm>
#include <cmath>

#include "dialogic/utf8.h"

namespace dialogic {
namespace {

enum class Edit { kSubstitute, kDelete, kInsert };

Edit draw_edit(const NoiseSpec& noise, Rng& rng) {
  const double u = rng.uniform01();
  if (u < noise.substitution_weight) return Edit::kSubstitute;
  if (u < noise.substitution_weight + noise.deletion_weight) return Edit::kDelete;
  return Edit::kInsert;
}

// Uniform over the inventory minus `exclude`; returns false when the
// inventory holds nothing else.
bool draw_other(std::span<const char32_t> inventory, char32_t exclude, Rng& rng,
                char32_t& out) {
  const bool contains = std::binary_search(inventory.begin(), inventory.end(), exclude);
  const std::size_t n = inventory.size() - (contains ? 1 : 0);
  if (n == 0) return false;
  std::size_t k = rng.uniform_index(n);
  if (contains) {
    auto pos = static_cast<std::size_t>(
        std::lower_bound(inventory.begin(), inventory.end(), exclude) - inventory.begin());
    if (k >= pos) ++k;
  }
  out = inventory[k];
  return true;
}

}  // namespace

void NoiseSpec::validate() const {
  if (!(target_cer >= 0.0 && target_cer < 1.0)) {
    throw ConfigError("noise.target_cer", "must lie in [0, 1)");
  }
  const double weights[] = {substitution_weight, deletion_weight, insertion_weight};
  const char* names[] = {"substitution", "deletion", "insertion"};
  for (int i = 0; i < 3; ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
      throw ConfigError(std::string("noise.") + names[i], "weight must be nonnegative");
    }
  }
  if (std::abs(weights[0] + weights[1] + weights[2] - 1.0) > 1e-9) {
    throw ConfigError("noise", "edit weights must sum to 1");
  }
}

std::u32string apply_asr_noise(std::u32string_view text, const NoiseSpec& noise,
                               std::span<const char32_t> inventory, Rng& rng) {
  if (text.empty()) throw std::invalid_argument("apply_asr_noise: empty text");
  if (noise.target_cer == 0.0) return std::u32string(text);
  if (inventory.empty()) throw std::invalid_argument("apply_asr_noise: empty inventory");

  std::u32string out;
  out.reserve(text.size() + text.size() / 4);
  for (char32_t ch : text) {
    if (rng.uniform01() >= noise.target_cer) {
      out.push_back(ch);
      continue;
    }
    char32_t other = 0;
    switch (draw_edit(noise, rng)) {
      case Edit::kSubstitute:
        // With no distinct character available a substitution is a no-op
        // edit, so fall back to inserting the only character there is.
        if (draw_other(inventory, ch, rng, other)) {
          out.push_back(other);
        } else {
          out.push_back(inventory.front());
          out.push_back(ch);
        }
        break;
      case Edit::kDelete:
        break;
      case Edit::kInsert:
        out.push_back(inventory[rng.uniform_index(inventory.size())]);
        out.push_back(ch);
        break;
    }
  }
  if (out.empty()) out.push_back(text.front());
  return out;
}

std::string apply_asr_noise(std::string_view text, const NoiseSpec& noise) {
  const std::u32string decoded = utf8_decode(text);
  std::vector<char32_t> inventory(decoded.begin(), decoded.end());
  std::sort(inventory.begin(), inventory.end());
  inventory.erase(std::unique(inventory.begin(), inventory.end()), inventory.end());
  Rng rng(noise.rng_seed);
  return utf8_encode(apply_asr_noise(decoded, noise, inventory, rng));
}

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double character_error_rate(std::span<const std::string> clean,
                            std::span<const std::string> noisy) {
  if (clean.size() != noisy.size()) {
    throw std::invalid_argument("character_error_rate: size mismatch");
  }
  std::size_t edits = 0;
  std::size_t length = 0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const auto ref = utf8_decode(clean[i]);
    edits += edit_distance(ref, utf8_decode(noisy[i]));
    length += ref.size();
  }
  return length == 0 ? 0.0 : static_cast<double>(edits) / static_cast<double>(length);
}

std::vector<char32_t> character_inventory(std::span<const std::string> texts) {
  std::vector<char32_t> out;
  for (const auto& text : texts) {
    for (char32_t ch : utf8_decode(text)) out.push_back(ch);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace dialogic
