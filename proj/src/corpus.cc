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

#include "dialogic/corpus.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "dialogic/utf8.h"
#include "json.hpp"

namespace dialogic {
namespace {

using nlohmann::ordered_json;

constexpr std::string_view kFields[] = {"uid", "text", "label", "split"};

DatasetError parse_error(std::string_view source, std::size_t line,
                         const std::string& what) {
  return DatasetError(DatasetError::Kind::kParse, line,
                      std::string(source) + ":" + std::to_string(line) + ": " + what);
}

bool blank(std::string_view line) {
  for (char c : line) {
    if (c != ' ' && c != '\t' && c != '\r') return false;
  }
  return true;
}

bool text_is_blank(std::string_view text) {
  return trim(utf8_decode(text)).empty();
}

}  // namespace

std::string_view split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kValidation: return "validation";
    case Split::kTest: return "test";
  }
  return "train";
}

std::optional<Split> split_from_name(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "validation") return Split::kValidation;
  if (name == "test") return Split::kTest;
  return std::nullopt;
}

std::vector<LabeledExample> parse_dataset(std::istream& in,
                                          std::string_view source_name) {
  std::vector<LabeledExample> out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;

    ordered_json record;
    try {
      record = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw parse_error(source_name, line_no, e.what());
    }
    if (!record.is_object()) throw parse_error(source_name, line_no, "record is not an object");
    for (const auto& field : kFields) {
      auto it = record.find(field);
      if (it == record.end()) {
        throw parse_error(source_name, line_no, "missing field '" + std::string(field) + "'");
      }
      if (!it->is_string()) {
        throw parse_error(source_name, line_no, "field '" + std::string(field) + "' is not a string");
      }
    }
    if (record.size() != std::size(kFields)) {
      throw parse_error(source_name, line_no, "unexpected extra fields");
    }

    LabeledExample ex;
    ex.uid = record["uid"].get<std::string>();
    ex.text = record["text"].get<std::string>();
    const auto label_name = record["label"].get<std::string>();
    const auto split = record["split"].get<std::string>();

    auto label = category_from_name(label_name);
    if (!label) {
      throw DatasetError(DatasetError::Kind::kTaxonomy, line_no,
                         std::string(source_name) + ":" + std::to_string(line_no) +
                             ": record '" + ex.uid + "' has unknown label '" +
                             label_name + "'");
    }
    ex.label = *label;
    auto split_value = split_from_name(split);
    if (!split_value) {
      throw parse_error(source_name, line_no, "unknown split '" + split + "'");
    }
    ex.split = *split_value;

    bool empty_text = false;
    try {
      empty_text = text_is_blank(ex.text);
    } catch (const std::invalid_argument& e) {
      throw parse_error(source_name, line_no, e.what());
    }
    if (empty_text) {
      throw DatasetError(DatasetError::Kind::kInvalidText, line_no,
                         std::string(source_name) + ":" + std::to_string(line_no) +
                             ": record '" + ex.uid + "' has empty text");
    }
    if (!seen.insert(ex.uid).second) {
      throw DatasetError(DatasetError::Kind::kUniqueness, line_no,
                         std::string(source_name) + ":" + std::to_string(line_no) +
                             ": duplicate uid '" + ex.uid + "'");
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<LabeledExample> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DatasetError(DatasetError::Kind::kIo, 0,
                       "cannot open dataset '" + path.string() + "'");
  }
  return parse_dataset(in, path.string());
}

void validate_examples(std::span<const LabeledExample> examples) {
  std::unordered_set<std::string_view> seen;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    if (text_is_blank(ex.text)) {
      throw DatasetError(DatasetError::Kind::kInvalidText, i + 1,
                         "record '" + ex.uid + "' has empty text");
    }
    if (!seen.insert(ex.uid).second) {
      throw DatasetError(DatasetError::Kind::kUniqueness, i + 1,
                         "duplicate uid '" + ex.uid + "'");
    }
  }
}

void write_dataset(std::ostream& out, std::span<const LabeledExample> examples) {
  validate_examples(examples);
  for (const auto& ex : examples) {
    ordered_json record;
    record["uid"] = ex.uid;
    record["text"] = ex.text;
    record["label"] = std::string(category_name(ex.label));
    record["split"] = std::string(split_name(ex.split));
    out << record.dump() << '\n';
  }
}

void write_dataset(const std::filesystem::path& path,
                   std::span<const LabeledExample> examples) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DatasetError(DatasetError::Kind::kIo, 0,
                       "cannot write dataset '" + path.string() + "'");
  }
  write_dataset(out, examples);
  if (!out) {
    throw DatasetError(DatasetError::Kind::kIo, 0,
                       "write failed for '" + path.string() + "'");
  }
}

std::vector<LabeledExample> filter_split(std::span<const LabeledExample> examples,
                                         Split split) {
  std::vector<LabeledExample> out;
  for (const auto& ex : examples) {
    if (ex.split == split) out.push_back(ex);
  }
  return out;
}

}  // namespace dialogic
