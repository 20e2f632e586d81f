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

#ifndef DIALOGIC_TESTS_FIXTURES_H_
#define DIALOGIC_TESTS_FIXTURES_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "dialogic/encoder.h"
#include "dialogic/rng.h"
#include "dialogic/taxonomy.h"

namespace fixtures {

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("dialogic_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// A tiny-reference encoder over a small alphabet with random parameters.
inline dialogic::TinyReferenceEncoder small_encoder(std::size_t embed_dim, std::size_t n_classes,
                                                    std::uint64_t seed,
                                                    double init_scale = 1.0) {
  dialogic::EncoderConfig cfg;
  cfg.embed_dim = embed_dim;
  cfg.max_seq_len = 8;
  cfg.n_classes = n_classes;
  cfg.rng_seed = seed;
  auto enc = dialogic::TinyReferenceEncoder::initialize(
      cfg, dialogic::Vocabulary(std::vector<char32_t>{U'a', U'b', U'c', U'd', U'e', U'f'}));
  if (init_scale != 1.0) {
    for (double& v : enc.mutable_parameters().values()) v *= init_scale;
  }
  return enc;
}

inline std::vector<dialogic::TokenSequence> random_sequences(std::size_t count,
                                                             std::size_t vocab_size,
                                                             std::size_t max_len,
                                                             dialogic::Rng& rng) {
  std::vector<dialogic::TokenSequence> out;
  for (std::size_t i = 0; i < count; ++i) {
    dialogic::TokenSequence seq{dialogic::kClsToken};
    const std::size_t len = 1 + rng.uniform_index(max_len - 1);
    for (std::size_t k = 0; k < len; ++k) {
      seq.push_back(static_cast<dialogic::TokenId>(1 + rng.uniform_index(vocab_size - 1)));
    }
    out.push_back(seq);
  }
  return out;
}

// Puts all probability mass on a class chosen per text.
class StubEncoder : public dialogic::SentenceEncoder {
 public:
  std::size_t n_classes() const override { return dialogic::kNumCategories; }
  std::size_t embed_dim() const override { return 1; }
  std::vector<dialogic::EncoderOutput> encode_texts(
      std::span<const std::string> texts) const override {
    std::vector<dialogic::EncoderOutput> out;
    for (const auto& text : texts) {
      dialogic::EncoderOutput o{{0.0}, std::vector<double>(dialogic::kNumCategories, 0.0)};
      o.class_probs[predict(text)] = 1.0;
      out.push_back(o);
    }
    return out;
  }
  virtual std::size_t predict(const std::string& text) const = 0;
};

// Knows the true label of every text it was built from.
class OracleEncoder final : public StubEncoder {
 public:
  explicit OracleEncoder(std::map<std::string, std::size_t> labels) : labels_(std::move(labels)) {}
  std::size_t predict(const std::string& text) const override { return labels_.at(text); }

 private:
  std::map<std::string, std::size_t> labels_;
};

class ConstantEncoder final : public StubEncoder {
 public:
  explicit ConstantEncoder(std::size_t label) : label_(label) {}
  std::size_t predict(const std::string&) const override { return label_; }

 private:
  std::size_t label_;
};

// Uniform random class per text, fixed by a hash of the text.
class RandomEncoder final : public StubEncoder {
 public:
  explicit RandomEncoder(std::uint64_t seed) : seed_(seed) {}
  std::size_t predict(const std::string& text) const override {
    dialogic::Rng rng(dialogic::derive_seed(seed_, dialogic::fnv1a(text.data(), text.size())));
    return rng.uniform_index(dialogic::kNumCategories);
  }

 private:
  std::uint64_t seed_;
};

}  // namespace fixtures

#endif  // DIALOGIC_TESTS_FIXTURES_H_
