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

#ifndef DIALOGIC_ENCODER_H_
#define DIALOGIC_ENCODER_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dialogic/taxonomy.h"

namespace dialogic {

enum class Architecture { kTinyReference, kExternalAdapter };

std::string_view architecture_name(Architecture architecture);
std::optional<Architecture> architecture_from_name(std::string_view name);

struct EncoderConfig {
  std::size_t vocab_size = 2;
  std::size_t embed_dim = 16;
  std::size_t max_seq_len = 64;
  std::size_t n_classes = kNumCategories;
  Architecture architecture = Architecture::kTinyReference;
  std::uint64_t rng_seed = 0;

  // Throws ConfigError with an "encoder."-prefixed field path.
  void validate() const;

  bool operator==(const EncoderConfig&) const = default;
};

// The [CLS] state and the classifier's softmax output for one sentence.
struct EncoderOutput {
  std::vector<double> representation;
  std::vector<double> class_probs;

  bool operator==(const EncoderOutput&) const = default;
};

using TokenId = std::uint32_t;
using TokenSequence = std::vector<TokenId>;

inline constexpr TokenId kClsToken = 0;
inline constexpr TokenId kUnkToken = 1;

// Character vocabulary. Ids 0 and 1 are reserved for [CLS] and [UNK]; known
// characters take ids 2.. in code point order.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Sorts and deduplicates `characters`.
  explicit Vocabulary(std::vector<char32_t> characters);

  static Vocabulary from_texts(std::span<const std::string> texts);

  TokenId lookup(char32_t ch) const;
  std::size_t size() const { return chars_.size() + 2; }
  const std::vector<char32_t>& characters() const { return chars_; }

  bool operator==(const Vocabulary&) const = default;

 private:
  std::vector<char32_t> chars_;
};

// [CLS] followed by one id per character, truncated to max_seq_len.
// Throws ContractViolation on empty text.
TokenSequence tokenize(std::string_view text, const Vocabulary& vocabulary,
                       const EncoderConfig& config);

enum class ParamBlock : std::size_t {
  kTokenEmbedding,     // vocab_size x d
  kPositionEmbedding,  // max_seq_len x d
  kQuery,              // d x d
  kKey,                // d x d
  kValue,              // d x d
  kMixWeight,          // d x d
  kMixBias,            // d
  kHeadWeight,         // n_classes x d
  kHeadBias,           // n_classes
};

inline constexpr std::size_t kNumParamBlocks = 9;

std::string_view param_block_name(ParamBlock block);

// All trainable tensors of the tiny reference encoder in one flat buffer.
// Gradients use the same type and layout.
class Parameters {
 public:
  Parameters() = default;
  // Zero-filled.
  explicit Parameters(const EncoderConfig& config);

  // Uniform on [-1/sqrt(d), 1/sqrt(d)] from config.rng_seed; biases start at 0.
  static Parameters initialize(const EncoderConfig& config);

  std::span<double> block(ParamBlock b);
  std::span<const double> block(ParamBlock b) const;
  std::size_t block_rows(ParamBlock b) const { return shapes_[index(b)][0]; }
  std::size_t block_cols(ParamBlock b) const { return shapes_[index(b)][1]; }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  std::size_t size() const { return data_.size(); }

  // this += alpha * other.
  void add_scaled(double alpha, const Parameters& other);
  void fill(double value);
  bool all_finite() const;

  bool operator==(const Parameters&) const = default;

 private:
  static constexpr std::size_t index(ParamBlock b) { return static_cast<std::size_t>(b); }

  std::array<std::size_t, kNumParamBlocks + 1> offsets_{};
  std::array<std::array<std::size_t, 2>, kNumParamBlocks> shapes_{};
  std::vector<double> data_;
};

// Intermediate values of one forward pass, kept for backpropagation.
struct ForwardTrace {
  TokenSequence tokens;
  std::vector<double> inputs;     // n x d, token + position embeddings
  std::vector<double> query;      // d, from the [CLS] input
  std::vector<double> keys;       // n x d
  std::vector<double> values;     // n x d
  std::vector<double> attention;  // n
  std::vector<double> mixed;      // d, [CLS] input + attended context
  std::vector<double> representation;  // d
  std::vector<double> logits;     // n_classes
  std::vector<double> probs;      // n_classes
};

// Pluggable sentence encoder. Implementations must be pure: the same inputs
// give the same outputs for a fixed parameter set.
class SentenceEncoder {
 public:
  virtual ~SentenceEncoder() = default;

  virtual std::size_t n_classes() const = 0;
  virtual std::size_t embed_dim() const = 0;
  virtual std::vector<EncoderOutput> encode_texts(
      std::span<const std::string> texts) const = 0;
};

// Character embeddings plus learned positions, one attention read-out with
// the [CLS] position as query, a residual tanh mixing layer, and an affine
// softmax head over the [CLS] state.
class TinyReferenceEncoder final : public SentenceEncoder {
 public:
  TinyReferenceEncoder(EncoderConfig config, Vocabulary vocabulary,
                       Parameters parameters);

  // Sets config.vocab_size from the vocabulary and draws fresh parameters.
  static TinyReferenceEncoder initialize(EncoderConfig config,
                                         Vocabulary vocabulary);

  const EncoderConfig& config() const { return config_; }
  const Vocabulary& vocabulary() const { return vocabulary_; }
  const Parameters& parameters() const { return parameters_; }
  Parameters& mutable_parameters() { return parameters_; }

  TokenSequence tokenize(std::string_view text) const {
    return dialogic::tokenize(text, vocabulary_, config_);
  }

  // Throws ContractViolation unless the sequence starts with [CLS], fits in
  // max_seq_len, and only holds ids below vocab_size.
  ForwardTrace forward(std::span<const TokenId> tokens) const;

  std::vector<EncoderOutput> encode(std::span<const TokenSequence> batch) const;

  std::size_t n_classes() const override { return config_.n_classes; }
  std::size_t embed_dim() const override { return config_.embed_dim; }
  std::vector<EncoderOutput> encode_texts(
      std::span<const std::string> texts) const override;

  // Accumulates into `gradient` the parameter gradient of a scalar loss whose
  // partial derivatives w.r.t. this trace's representation and logits are
  // given. Either span may be empty, meaning zero.
  void backward(const ForwardTrace& trace,
                std::span<const double> d_representation,
                std::span<const double> d_logits, Parameters& gradient) const;

 private:
  EncoderConfig config_;
  Vocabulary vocabulary_;
  Parameters parameters_;
};

// Position of the largest entry; ties resolve to the lowest index.
std::size_t argmax(std::span<const double> values);

}  // namespace dialogic

#endif  // DIALOGIC_ENCODER_H_
