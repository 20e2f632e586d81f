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

#include "dialogic/taxonomy.h"

#include <stdexcept>

namespace dialogic {
namespace {

constexpr std::array<std::string_view, kNumCategories> kNames = {
    "greeting",  "commending", "guidance",   "example-giving", "repeating",
    "reviewing", "note-taking", "summarization", "others",
};

}  // namespace

Category category_from_index(std::size_t index) {
  if (index >= kNumCategories) {
    throw std::out_of_range("category index " + std::to_string(index) +
                            " outside 0.." + std::to_string(kNumCategories - 1));
  }
  return static_cast<Category>(index);
}

std::string_view category_name(Category c) { return kNames.at(category_index(c)); }

std::optional<Category> category_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<Category>(i);
  }
  return std::nullopt;
}

const std::array<Category, kNumCategories>& all_categories() {
  static const std::array<Category, kNumCategories> kAll = [] {
    std::array<Category, kNumCategories> out{};
    for (std::size_t i = 0; i < kNumCategories; ++i) out[i] = static_cast<Category>(i);
    return out;
  }();
  return kAll;
}

const std::array<Category, kNumInstructionCategories>& instruction_categories() {
  static const std::array<Category, kNumInstructionCategories> kInstructions = [] {
    std::array<Category, kNumInstructionCategories> out{};
    for (std::size_t i = 0; i < kNumInstructionCategories; ++i) {
      out[i] = static_cast<Category>(i);
    }
    return out;
  }();
  return kInstructions;
}

std::vector<std::string> category_names() {
  return {kNames.begin(), kNames.end()};
}

}  // namespace dialogic
