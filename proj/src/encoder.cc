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

#include "dialogic/encoder.h"

#include <algorithm>
#include <cmath>

#include "dialogic/errors.h"
#include "dialogic/rng.h"
#include "dialogic/utf8.h"

namespace dialogic {
namespace {

// out = W x for a row-major rows x cols matrix.
void matvec(std::span<const double> w, std::size_t rows, std::size_t cols,
            const double* x, double* out) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = w.data() + i * cols;
    double sum = 0.0;
    for (std::size_t j = 0; j < cols; ++j) sum += row[j] * x[j];
    out[i] = sum;
  }
}

// out += W^T y.
void matvec_transposed_add(std::span<const double> w, std::size_t rows,
                           std::size_t cols, const double* y, double* out) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* row = w.data() + i * cols;
    const double yi = y[i];
    if (yi == 0.0) continue;
    for (std::size_t j = 0; j < cols; ++j) out[j] += row[j] * yi;
  }
}

// G += y x^T.
void outer_add(std::span<double> g, std::size_t rows, std::size_t cols,
               const double* y, const double* x) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double yi = y[i];
    if (yi == 0.0) continue;
    double* row = g.data() + i * cols;
    for (std::size_t j = 0; j < cols; ++j) row[j] += yi * x[j];
  }
}

void softmax_inplace(std::span<double> values) {
  const double max = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double& v : values) {
    v = std::exp(v - max);
    sum += v;
  }
  for (double& v : values) v /= sum;
}

}  // namespace

std::string_view architecture_name(Architecture architecture) {
  return architecture == Architecture::kTinyReference ? "tiny-reference"
                                                      : "external-adapter";
}

std::optional<Architecture> architecture_from_name(std::string_view name) {
  if (name == "tiny-reference") return Architecture::kTinyReference;
  if (name == "external-adapter") return Architecture::kExternalAdapter;
  return std::nullopt;
}

void EncoderConfig::validate() const {
  if (vocab_size < 2) throw ConfigError("encoder.vocab_size", "must be at least 2");
  if (embed_dim < 1) throw ConfigError("encoder.embed_dim", "must be positive");
  if (max_seq_len < 2) throw ConfigError("encoder.max_seq_len", "must be at least 2");
  if (n_classes < 1) throw ConfigError("encoder.n_classes", "must be positive");
}

Vocabulary::Vocabulary(std::vector<char32_t> characters) : chars_(std::move(characters)) {
  std::sort(chars_.begin(), chars_.end());
  chars_.erase(std::unique(chars_.begin(), chars_.end()), chars_.end());
}

Vocabulary Vocabulary::from_texts(std::span<const std::string> texts) {
  std::vector<char32_t> chars;
  for (const auto& text : texts) {
    for (char32_t ch : utf8_decode(text)) chars.push_back(ch);
  }
  return Vocabulary(std::move(chars));
}

TokenId Vocabulary::lookup(char32_t ch) const {
  auto it = std::lower_bound(chars_.begin(), chars_.end(), ch);
  if (it == chars_.end() || *it != ch) return kUnkToken;
  return static_cast<TokenId>(it - chars_.begin()) + 2;
}

TokenSequence tokenize(std::string_view text, const Vocabulary& vocabulary,
                       const EncoderConfig& config) {
  if (text.empty()) throw ContractViolation("tokenize: empty text");
  const std::u32string chars = utf8_decode(text);
  TokenSequence out;
  out.reserve(std::min(chars.size() + 1, config.max_seq_len));
  out.push_back(kClsToken);
  for (char32_t ch : chars) {
    if (out.size() >= config.max_seq_len) break;
    out.push_back(vocabulary.lookup(ch));
  }
  return out;
}

std::string_view param_block_name(ParamBlock block) {
  static constexpr std::string_view kNames[kNumParamBlocks] = {
      "token_embedding", "position_embedding", "query", "key", "value",
      "mix_weight",      "mix_bias",           "head_weight", "head_bias",
  };
  return kNames[static_cast<std::size_t>(block)];
}

Parameters::Parameters(const EncoderConfig& config) {
  const std::size_t d = config.embed_dim;
  shapes_ = {{
      {config.vocab_size, d},
      {config.max_seq_len, d},
      {d, d},
      {d, d},
      {d, d},
      {d, d},
      {d, 1},
      {config.n_classes, d},
      {config.n_classes, 1},
  }};
  offsets_[0] = 0;
  for (std::size_t b = 0; b < kNumParamBlocks; ++b) {
    offsets_[b + 1] = offsets_[b] + shapes_[b][0] * shapes_[b][1];
  }
  data_.assign(offsets_[kNumParamBlocks], 0.0);
}

Parameters Parameters::initialize(const EncoderConfig& config) {
  config.validate();
  Parameters params(config);
  Rng rng(config.rng_seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(config.embed_dim));
  for (std::size_t b = 0; b < kNumParamBlocks; ++b) {
    const auto block = static_cast<ParamBlock>(b);
    if (block == ParamBlock::kMixBias || block == ParamBlock::kHeadBias) continue;
    for (double& v : params.block(block)) v = rng.uniform(-scale, scale);
  }
  return params;
}

std::span<double> Parameters::block(ParamBlock b) {
  const std::size_t i = index(b);
  return std::span<double>(data_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

std::span<const double> Parameters::block(ParamBlock b) const {
  const std::size_t i = index(b);
  return std::span<const double>(data_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

void Parameters::add_scaled(double alpha, const Parameters& other) {
  if (other.data_.size() != data_.size()) {
    throw ContractViolation("Parameters::add_scaled: layout mismatch");
  }
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += alpha * other.data_[i];
}

void Parameters::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

bool Parameters::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

TinyReferenceEncoder::TinyReferenceEncoder(EncoderConfig config, Vocabulary vocabulary,
                                           Parameters parameters)
    : config_(config), vocabulary_(std::move(vocabulary)), parameters_(std::move(parameters)) {
  config_.validate();
  if (config_.architecture != Architecture::kTinyReference) {
    throw ConfigError("encoder.architecture", "TinyReferenceEncoder needs tiny-reference");
  }
  if (config_.vocab_size != vocabulary_.size()) {
    throw ConfigError("encoder.vocab_size", "does not match the vocabulary");
  }
  if (parameters_.size() != Parameters(config_).size()) {
    throw ContractViolation("TinyReferenceEncoder: parameter layout mismatch");
  }
}

TinyReferenceEncoder TinyReferenceEncoder::initialize(EncoderConfig config,
                                                      Vocabulary vocabulary) {
  config.vocab_size = vocabulary.size();
  Parameters params = Parameters::initialize(config);
  return TinyReferenceEncoder(config, std::move(vocabulary), std::move(params));
}

ForwardTrace TinyReferenceEncoder::forward(std::span<const TokenId> tokens) const {
  if (tokens.empty() || tokens.front() != kClsToken) {
    throw ContractViolation("encode: sequence must start with [CLS]");
  }
  if (tokens.size() > config_.max_seq_len) {
    throw ContractViolation("encode: sequence of length " + std::to_string(tokens.size()) +
                            " exceeds max_seq_len " + std::to_string(config_.max_seq_len));
  }
  const std::size_t d = config_.embed_dim;
  const std::size_t n = tokens.size();
  const std::size_t c = config_.n_classes;
  const auto& p = parameters_;

  ForwardTrace t;
  t.tokens.assign(tokens.begin(), tokens.end());
  t.inputs.resize(n * d);
  const auto embed = p.block(ParamBlock::kTokenEmbedding);
  const auto position = p.block(ParamBlock::kPositionEmbedding);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const TokenId id = tokens[pos];
    if (id >= config_.vocab_size) {
      throw ContractViolation("encode: token id " + std::to_string(id) + " out of range");
    }
    for (std::size_t j = 0; j < d; ++j) {
      t.inputs[pos * d + j] = embed[id * d + j] + position[pos * d + j];
    }
  }

  t.query.resize(d);
  matvec(p.block(ParamBlock::kQuery), d, d, t.inputs.data(), t.query.data());
  t.keys.resize(n * d);
  t.values.resize(n * d);
  t.attention.resize(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t pos = 0; pos < n; ++pos) {
    const double* x = t.inputs.data() + pos * d;
    matvec(p.block(ParamBlock::kKey), d, d, x, t.keys.data() + pos * d);
    matvec(p.block(ParamBlock::kValue), d, d, x, t.values.data() + pos * d);
    double score = 0.0;
    for (std::size_t j = 0; j < d; ++j) score += t.query[j] * t.keys[pos * d + j];
    t.attention[pos] = score * scale;
  }
  softmax_inplace(t.attention);

  t.mixed.assign(t.inputs.begin(), t.inputs.begin() + static_cast<std::ptrdiff_t>(d));
  for (std::size_t pos = 0; pos < n; ++pos) {
    const double a = t.attention[pos];
    for (std::size_t j = 0; j < d; ++j) t.mixed[j] += a * t.values[pos * d + j];
  }

  t.representation.resize(d);
  matvec(p.block(ParamBlock::kMixWeight), d, d, t.mixed.data(), t.representation.data());
  const auto mix_bias = p.block(ParamBlock::kMixBias);
  for (std::size_t j = 0; j < d; ++j) {
    t.representation[j] = std::tanh(t.representation[j] + mix_bias[j]);
  }

  t.logits.resize(c);
  matvec(p.block(ParamBlock::kHeadWeight), c, d, t.representation.data(), t.logits.data());
  const auto head_bias = p.block(ParamBlock::kHeadBias);
  for (std::size_t k = 0; k < c; ++k) t.logits[k] += head_bias[k];
  t.probs = t.logits;
  softmax_inplace(t.probs);
  return t;
}

std::vector<EncoderOutput> TinyReferenceEncoder::encode(
    std::span<const TokenSequence> batch) const {
  if (batch.empty()) throw ContractViolation("encode: empty batch");
  std::vector<EncoderOutput> out;
  out.reserve(batch.size());
  for (const auto& seq : batch) {
    ForwardTrace t = forward(seq);
    out.push_back(EncoderOutput{std::move(t.representation), std::move(t.probs)});
  }
  return out;
}

std::vector<EncoderOutput> TinyReferenceEncoder::encode_texts(
    std::span<const std::string> texts) const {
  std::vector<TokenSequence> batch;
  batch.reserve(texts.size());
  for (const auto& text : texts) batch.push_back(tokenize(text));
  return encode(batch);
}

void TinyReferenceEncoder::backward(const ForwardTrace& t,
                                    std::span<const double> d_representation,
                                    std::span<const double> d_logits,
                                    Parameters& g) const {
  const std::size_t d = config_.embed_dim;
  const std::size_t n = t.tokens.size();
  const std::size_t c = config_.n_classes;
  const auto& p = parameters_;
  if ((!d_representation.empty() && d_representation.size() != d) ||
      (!d_logits.empty() && d_logits.size() != c)) {
    throw ContractViolation("backward: upstream gradient has the wrong size");
  }

  // Head.
  std::vector<double> d_rep(d, 0.0);
  if (!d_representation.empty()) std::copy(d_representation.begin(), d_representation.end(), d_rep.begin());
  if (!d_logits.empty()) {
    outer_add(g.block(ParamBlock::kHeadWeight), c, d, d_logits.data(), t.representation.data());
    auto head_bias = g.block(ParamBlock::kHeadBias);
    for (std::size_t k = 0; k < c; ++k) head_bias[k] += d_logits[k];
    matvec_transposed_add(p.block(ParamBlock::kHeadWeight), c, d, d_logits.data(), d_rep.data());
  }

  // tanh mixing layer.
  std::vector<double> d_pre(d);
  for (std::size_t j = 0; j < d; ++j) {
    const double r = t.representation[j];
    d_pre[j] = d_rep[j] * (1.0 - r * r);
  }
  outer_add(g.block(ParamBlock::kMixWeight), d, d, d_pre.data(), t.mixed.data());
  auto mix_bias = g.block(ParamBlock::kMixBias);
  for (std::size_t j = 0; j < d; ++j) mix_bias[j] += d_pre[j];
  std::vector<double> d_mixed(d, 0.0);
  matvec_transposed_add(p.block(ParamBlock::kMixWeight), d, d, d_pre.data(), d_mixed.data());

  // Attention read-out. The residual path feeds d_mixed straight into x_0.
  std::vector<double> d_inputs(n * d, 0.0);
  for (std::size_t j = 0; j < d; ++j) d_inputs[j] += d_mixed[j];

  std::vector<double> d_attention(n);
  double weighted = 0.0;
  for (std::size_t pos = 0; pos < n; ++pos) {
    double dot = 0.0;
    for (std::size_t j = 0; j < d; ++j) dot += d_mixed[j] * t.values[pos * d + j];
    d_attention[pos] = dot;
    weighted += t.attention[pos] * dot;
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<double> d_query(d, 0.0);
  std::vector<double> d_key(d);
  std::vector<double> d_value(d);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const double* x = t.inputs.data() + pos * d;
    double* dx = d_inputs.data() + pos * d;
    const double a = t.attention[pos];
    const double d_score = a * (d_attention[pos] - weighted) * scale;

    for (std::size_t j = 0; j < d; ++j) {
      d_query[j] += d_score * t.keys[pos * d + j];
      d_key[j] = d_score * t.query[j];
      d_value[j] = a * d_mixed[j];
    }
    outer_add(g.block(ParamBlock::kValue), d, d, d_value.data(), x);
    matvec_transposed_add(p.block(ParamBlock::kValue), d, d, d_value.data(), dx);
    outer_add(g.block(ParamBlock::kKey), d, d, d_key.data(), x);
    matvec_transposed_add(p.block(ParamBlock::kKey), d, d, d_key.data(), dx);
  }
  outer_add(g.block(ParamBlock::kQuery), d, d, d_query.data(), t.inputs.data());
  matvec_transposed_add(p.block(ParamBlock::kQuery), d, d, d_query.data(), d_inputs.data());

  // Embeddings.
  auto g_embed = g.block(ParamBlock::kTokenEmbedding);
  auto g_position = g.block(ParamBlock::kPositionEmbedding);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const TokenId id = t.tokens[pos];
    for (std::size_t j = 0; j < d; ++j) {
      g_embed[id * d + j] += d_inputs[pos * d + j];
      g_position[pos * d + j] += d_inputs[pos * d + j];
    }
  }
}

std::size_t argmax(std::span<const double> values) {
  if (values.empty()) throw ContractViolation("argmax: empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

}  // namespace dialogic
