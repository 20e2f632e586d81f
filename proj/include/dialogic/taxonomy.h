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

#ifndef DIALOGIC_TAXONOMY_H_
#define DIALOGIC_TAXONOMY_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dialogic {

// The eight dialogic-instruction categories plus the catch-all "others".
// Ids are contiguous from 0 and match the classifier's output positions.
enum class Category : std::uint8_t {
  kGreeting = 0,
  kCommending,
  kGuidance,
  kExampleGiving,
  kRepeating,
  kReviewing,
  kNoteTaking,
  kSummarization,
  kOthers,
};

inline constexpr std::size_t kNumCategories = 9;
inline constexpr std::size_t kNumInstructionCategories = 8;

constexpr std::size_t category_index(Category c) {
  return static_cast<std::size_t>(c);
}

// Throws std::out_of_range for an index outside 0..8.
Category category_from_index(std::size_t index);

std::string_view category_name(Category c);
std::optional<Category> category_from_name(std::string_view name);

// "others" is trainable but never a positive class in evaluation.
constexpr bool is_instruction(Category c) { return c != Category::kOthers; }

const std::array<Category, kNumCategories>& all_categories();
const std::array<Category, kNumInstructionCategories>& instruction_categories();

// Category names in id order, as stored in checkpoints.
std::vector<std::string> category_names();

}  // namespace dialogic

#endif  // DIALOGIC_TAXONOMY_H_
