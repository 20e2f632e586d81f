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

#ifndef DIALOGIC_CHECKPOINT_H_
#define DIALOGIC_CHECKPOINT_H_

#include <filesystem>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

#include "dialogic/encoder.h"
#include "json.hpp"

namespace dialogic {

// Checkpoints are JSON documents:
//   {"format": "dialogic-checkpoint", "version": 1,
//    "architecture": "tiny-reference" | "external-adapter",
//    "categories": [...9 names in id order...],
//    "config": {...EncoderConfig...},
//    "vocabulary": ["字", ...],            (tiny-reference)
//    "parameters": {"token_embedding": [...], ...},  (tiny-reference)
//    "adapter": "<name>", "adapter_config": {...},  (external-adapter)
//    "metadata": {...}}
// Doubles are written in shortest round-trip form, so a reload reproduces
// encode outputs bit for bit.
inline constexpr int kCheckpointVersion = 1;

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The checkpoint's class list differs from the corpus taxonomy.
class TaxonomyMismatchError : public CheckpointError {
 public:
  using CheckpointError::CheckpointError;
};

std::string checkpoint_json(const TinyReferenceEncoder& encoder,
                            const nlohmann::ordered_json& metadata = {});

void save_checkpoint(const std::filesystem::path& path, const TinyReferenceEncoder& encoder,
                     const nlohmann::ordered_json& metadata = {});

TinyReferenceEncoder load_tiny_reference(const std::filesystem::path& path);
TinyReferenceEncoder tiny_reference_from_json(const nlohmann::json& doc);

// Builds an encoder from the checkpoint's "adapter_config" section. The
// checkpoint's directory is passed so relative paths can be resolved.
using AdapterFactory = std::function<std::unique_ptr<SentenceEncoder>(
    const nlohmann::json& adapter_config, const std::filesystem::path& checkpoint_dir)>;

// Makes `name` loadable from external-adapter checkpoints in this process.
void register_adapter(const std::string& name, AdapterFactory factory);

// Loads either architecture. Throws CheckpointError for unreadable or
// malformed files and TaxonomyMismatchError when the class list differs
// from the taxonomy.
std::unique_ptr<SentenceEncoder> load_encoder(const std::filesystem::path& path);

// Hex FNV-1a of the file's bytes.
std::string checkpoint_id(const std::filesystem::path& path);

}  // namespace dialogic

#endif  // DIALOGIC_CHECKPOINT_H_
