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

#ifndef DIALOGIC_CORPUS_H_
#define DIALOGIC_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dialogic/taxonomy.h"

namespace dialogic {

enum class Split { kTrain, kValidation, kTest };

std::string_view split_name(Split split);
std::optional<Split> split_from_name(std::string_view name);

struct LabeledExample {
  std::string uid;
  std::string text;  // UTF-8, non-empty after trimming
  Category label = Category::kOthers;
  Split split = Split::kTrain;

  bool operator==(const LabeledExample&) const = default;
};

class DatasetError : public std::runtime_error {
 public:
  enum class Kind { kIo, kParse, kTaxonomy, kUniqueness, kInvalidText };

  DatasetError(Kind kind, std::size_t line, const std::string& message)
      : std::runtime_error(message), kind_(kind), line_(line) {}

  Kind kind() const { return kind_; }
  // 1-based line of the offending record; 0 when not tied to a line.
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

// Reads a JSONL dataset: one object per line with exactly the fields
// uid, text, label, split. Blank lines are skipped. Records keep file order.
std::vector<LabeledExample> load_dataset(const std::filesystem::path& path);
std::vector<LabeledExample> parse_dataset(std::istream& in,
                                          std::string_view source_name);

void write_dataset(const std::filesystem::path& path,
                   std::span<const LabeledExample> examples);
void write_dataset(std::ostream& out, std::span<const LabeledExample> examples);

// Throws DatasetError(kUniqueness) on repeated uids and kInvalidText on texts
// that are empty after trimming.
void validate_examples(std::span<const LabeledExample> examples);

std::vector<LabeledExample> filter_split(std::span<const LabeledExample> examples,
                                         Split split);

}  // namespace dialogic

#endif  // DIALOGIC_CORPUS_H_
