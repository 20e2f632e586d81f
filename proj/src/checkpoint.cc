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

#include "dialogic/checkpoint.h"

#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "dialogic/rng.h"
#include "dialogic/taxonomy.h"
#include "dialogic/utf8.h"

namespace dialogic {
namespace {

constexpr const char* kFormat = "dialogic-checkpoint";

struct AdapterRegistry {
  std::mutex mutex;
  std::map<std::string, AdapterFactory> factories;
};

AdapterRegistry& registry() {
  static AdapterRegistry instance;
  return instance;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json parse_checkpoint(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError("checkpoint '" + path.string() + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != kFormat) {
    throw CheckpointError("'" + path.string() + "' is not a dialogic checkpoint");
  }
  if (doc.value("version", 0) != kCheckpointVersion) {
    throw CheckpointError("unsupported checkpoint version in '" + path.string() + "'");
  }
  return doc;
}

void check_taxonomy(const nlohmann::json& doc) {
  const auto expected = category_names();
  std::vector<std::string> found;
  try {
    found = doc.at("categories").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception&) {
    throw CheckpointError("checkpoint has no category list");
  }
  if (found != expected) {
    std::string listed;
    for (const auto& name : found) listed += (listed.empty() ? "" : ",") + name;
    throw TaxonomyMismatchError("checkpoint categories [" + listed +
                                "] do not match the 9-label taxonomy");
  }
}

}  // namespace

std::string checkpoint_json(const TinyReferenceEncoder& encoder,
                            const nlohmann::ordered_json& metadata) {
  const EncoderConfig& cfg = encoder.config();
  nlohmann::ordered_json doc;
  doc["format"] = kFormat;
  doc["version"] = kCheckpointVersion;
  doc["architecture"] = std::string(architecture_name(cfg.architecture));
  doc["categories"] = category_names();
  doc["config"] = {{"vocab_size", cfg.vocab_size},   {"embed_dim", cfg.embed_dim},
                   {"max_seq_len", cfg.max_seq_len}, {"n_classes", cfg.n_classes},
                   {"rng_seed", cfg.rng_seed}};
  nlohmann::ordered_json vocab = nlohmann::ordered_json::array();
  for (char32_t ch : encoder.vocabulary().characters()) vocab.push_back(utf8_encode(ch));
  doc["vocabulary"] = std::move(vocab);
  nlohmann::ordered_json params;
  for (std::size_t b = 0; b < kNumParamBlocks; ++b) {
    const auto block = static_cast<ParamBlock>(b);
    const auto values = encoder.parameters().block(block);
    params[std::string(param_block_name(block))] = std::vector<double>(values.begin(), values.end());
  }
  doc["parameters"] = std::move(params);
  doc["metadata"] = metadata.is_null() ? nlohmann::ordered_json::object() : metadata;
  return doc.dump() + "\n";
}

void save_checkpoint(const std::filesystem::path& path, const TinyReferenceEncoder& encoder,
                     const nlohmann::ordered_json& metadata) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot write checkpoint '" + path.string() + "'");
  out << checkpoint_json(encoder, metadata);
  if (!out) throw CheckpointError("write failed for checkpoint '" + path.string() + "'");
}

TinyReferenceEncoder tiny_reference_from_json(const nlohmann::json& doc) {
  try {
    check_taxonomy(doc);
    const auto& c = doc.at("config");
    EncoderConfig cfg;
    cfg.vocab_size = c.at("vocab_size").get<std::size_t>();
    cfg.embed_dim = c.at("embed_dim").get<std::size_t>();
    cfg.max_seq_len = c.at("max_seq_len").get<std::size_t>();
    cfg.n_classes = c.at("n_classes").get<std::size_t>();
    cfg.rng_seed = c.at("rng_seed").get<std::uint64_t>();
    cfg.architecture = Architecture::kTinyReference;

    std::vector<char32_t> chars;
    for (const auto& item : doc.at("vocabulary")) {
      const std::u32string decoded = utf8_decode(item.get<std::string>());
      if (decoded.size() != 1) throw CheckpointError("vocabulary entry is not one character");
      chars.push_back(decoded.front());
    }
    Vocabulary vocab(std::move(chars));
    if (vocab.size() != cfg.vocab_size) {
      throw CheckpointError("vocabulary has duplicate entries or disagrees with vocab_size");
    }

    Parameters params(cfg);
    const auto& stored = doc.at("parameters");
    for (std::size_t b = 0; b < kNumParamBlocks; ++b) {
      const auto block = static_cast<ParamBlock>(b);
      const auto values = stored.at(std::string(param_block_name(block))).get<std::vector<double>>();
      auto dest = params.block(block);
      if (values.size() != dest.size()) {
        throw CheckpointError("parameter block '" + std::string(param_block_name(block)) +
                              "' has " + std::to_string(values.size()) + " values, expected " +
                              std::to_string(dest.size()));
      }
      std::copy(values.begin(), values.end(), dest.begin());
    }
    return TinyReferenceEncoder(cfg, std::move(vocab), std::move(params));
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(std::string("malformed checkpoint: ") + e.what());
  }
}

TinyReferenceEncoder load_tiny_reference(const std::filesystem::path& path) {
  const nlohmann::json doc = parse_checkpoint(path);
  if (doc.value("architecture", "") != "tiny-reference") {
    throw CheckpointError("'" + path.string() + "' is not a tiny-reference checkpoint");
  }
  return tiny_reference_from_json(doc);
}

void register_adapter(const std::string& name, AdapterFactory factory) {
  auto& reg = registry();
  std::lock_guard<std::mutex> lock(reg.mutex);
  reg.factories[name] = std::move(factory);
}

std::unique_ptr<SentenceEncoder> load_encoder(const std::filesystem::path& path) {
  const nlohmann::json doc = parse_checkpoint(path);
  const std::string arch = doc.value("architecture", "");
  if (arch == "tiny-reference") {
    return std::make_unique<TinyReferenceEncoder>(tiny_reference_from_json(doc));
  }
  if (arch != "external-adapter") {
    throw CheckpointError("unknown architecture '" + arch + "' in '" + path.string() + "'");
  }
  check_taxonomy(doc);
  const std::string name = doc.value("adapter", "");
  AdapterFactory factory;
  {
    auto& reg = registry();
    std::lock_guard<std::mutex> lock(reg.mutex);
    auto it = reg.factories.find(name);
    if (it == reg.factories.end()) {
      throw CheckpointError("no encoder adapter named '" + name + "' is registered");
    }
    factory = it->second;
  }
  auto encoder = factory(doc.value("adapter_config", nlohmann::json::object()),
                         path.parent_path());
  if (!encoder) throw CheckpointError("adapter '" + name + "' returned no encoder");
  if (encoder->n_classes() != kNumCategories) {
    throw TaxonomyMismatchError("adapter '" + name + "' produces " +
                                std::to_string(encoder->n_classes()) + " classes");
  }
  return encoder;
}

std::string checkpoint_id(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(bytes.data(), bytes.size())));
  return buf;
}

}  // namespace dialogic
