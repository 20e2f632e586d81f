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


#include "dialogic/mtl_loss.h"

#include <cmath>

#include "doctest.h"
#include "dialogic/errors.h"
#include "dialogic/rng.h"
#include "oracles.h"

namespace dialogic {
namespace {

std::vector<double> uniform_probs(std::size_t n) { return std::vector<double>(n, 1.0 / n); }

std::vector<double> random_vector(std::size_t n, Rng& rng, double scale = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-scale, scale);
  return v;
}

std::vector<double> random_probs(std::size_t n, Rng& rng) {
  std::vector<double> p(n);
  double sum = 0.0;
  for (double& x : p) sum += (x = std::exp(rng.uniform(-3.0, 3.0)));
  for (double& x : p) x /= sum;
  return p;
}

TEST_CASE("cross entropy worked values") {
  std::vector<double> onehot(9, 0.0);
  onehot[4] = 1.0;
  CHECK(cross_entropy_term(onehot, 4) == 0.0);
  CHECK(cross_entropy_term(uniform_probs(9), 2) == doctest::Approx(2.1972245773).epsilon(1e-10));
  CHECK(cross_entropy_term(uniform_probs(9), 2) == doctest::Approx(std::log(9.0)).epsilon(1e-15));
  CHECK(std::isfinite(cross_entropy_term(onehot, 0)));
  CHECK(cross_entropy_term(onehot, 0) == doctest::Approx(-std::log(kProbabilityFloor)));

  Rng rng(2);
  std::vector<std::vector<double>> probs = {random_probs(9, rng), random_probs(9, rng), random_probs(9, rng)};
  std::vector<std::size_t> labels = {0, 5, 8};
  double sum = 0.0;
  for (std::size_t i = 0; i < 3; ++i) sum += cross_entropy_term(probs[i], labels[i]);
  CHECK(cross_entropy(probs, labels) == doctest::Approx(sum).epsilon(1e-15));
}

TEST_CASE("cross entropy rejects unnormalized input") {
  CHECK_THROWS_AS(cross_entropy_term(std::vector<double>{0.5, 0.4}, 0), ContractViolation);
  CHECK_THROWS_AS(cross_entropy_term(uniform_probs(3), 3), ContractViolation);
  CHECK_NOTHROW(cross_entropy_term(std::vector<double>{0.5, 0.49995}, 0));
}

TEST_CASE("contrastive worked values") {
  const std::vector<double> a = {0.3, -0.2, 0.9};
  CHECK(contrastive(a, a, 1.0) == 1.0);
  CHECK(contrastive(std::vector<double>{0.0, 0.0}, std::vector<double>{2.0, 0.0}, 1.0) == 0.0);
  CHECK(contrastive(std::vector<double>{0.0, 0.0}, std::vector<double>{0.0, 0.4}, 1.0) ==
        doctest::Approx(0.36).epsilon(1e-15));
  CHECK(contrastive(a, a, 2.5) == doctest::Approx(6.25));
  CHECK_THROWS_AS(contrastive(a, std::vector<double>{1.0}, 1.0), ContractViolation);
}

TEST_CASE("contrastive symmetry, monotonicity and deadzone") {
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = random_vector(6, rng);
    const auto b = random_vector(6, rng);
    const double margin = rng.uniform(0.1, 3.0);
    CHECK(contrastive(a, b, margin) == contrastive(b, a, margin));
    CHECK(contrastive(a, b, margin) >= 0.0);
  }
  const std::vector<double> origin(4, 0.0);
  double previous = contrastive(origin, origin, 1.0);
  for (int k = 1; k < 100; ++k) {
    const std::vector<double> p = {k / 100.0, 0.0, 0.0, 0.0};
    const double value = contrastive(origin, p, 1.0);
    CHECK(value < previous);
    previous = value;
  }
  for (int trial = 0; trial < 200; ++trial) {
    auto far = random_vector(4, rng);
    far[0] += 5.0;
    const auto nudge = random_vector(4, rng, 0.5);
    for (std::size_t j = 0; j < 4; ++j) far[j] += nudge[j];
    CHECK(contrastive(origin, far, 1.0) == 0.0);
    for (double g : contrastive_gradient(origin, far, 1.0)) CHECK(g == 0.0);
  }
  for (double g : contrastive_gradient(origin, origin, 1.0)) CHECK(g == 0.0);
}

struct Batch {
  std::vector<EncoderOutput> outputs;
  std::vector<std::size_t> labels;
  std::vector<std::vector<double>> partner_reps;
  std::vector<std::size_t> partner_labels;
};

Batch make_batch(std::uint64_t seed, std::size_t n = 4, std::size_t dim = 5) {
  Rng rng(seed);
  Batch b;
  for (std::size_t i = 0; i < n; ++i) {
    b.outputs.push_back({random_vector(dim, rng, 0.5), random_probs(9, rng)});
    b.labels.push_back(rng.uniform_index(9));
    b.partner_reps.push_back(random_vector(dim, rng, 0.5));
    b.partner_labels.push_back((b.labels.back() + 1 + rng.uniform_index(8)) % 9);
  }
  return b;
}

double oracle_of(const Batch& b, double gamma, double margin) {
  std::vector<std::vector<double>> probs, reps;
  for (const auto& o : b.outputs) {
    probs.push_back(o.class_probs);
    reps.push_back(o.representation);
  }
  return oracle::total_loss(probs, b.labels, reps, b.partner_reps, gamma, margin);
}

TEST_CASE("batch of four matches the scalar oracle") {
  LossConfig cfg;
  cfg.gamma = 0.5;
  cfg.margin = 1.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto b = make_batch(seed);
    PairedRepresentations pairs{b.partner_reps, b.partner_labels};
    CHECK(std::abs(total_loss(b.outputs, b.labels, &pairs, cfg) - oracle_of(b, 0.5, 1.0)) <= 1e-9);
  }
}

TEST_CASE("hand-built batch of four") {
  // Probabilities and representations with a closed-form loss.
  std::vector<EncoderOutput> outputs(4);
  std::vector<std::size_t> labels = {0, 1, 2, 3};
  for (std::size_t i = 0; i < 4; ++i) {
    outputs[i].class_probs = uniform_probs(4);
    outputs[i].representation = {0.0, 0.0};
  }
  outputs[0].class_probs = {0.5, 0.25, 0.125, 0.125};
  const std::vector<std::vector<double>> partners = {{0.0, 0.0}, {0.6, 0.8}, {0.3, 0.4}, {3.0, 0.0}};
  const std::vector<std::size_t> partner_labels = {1, 2, 3, 0};
  PairedRepresentations pairs{partners, partner_labels};
  LossConfig cfg;
  const double ce = std::log(2.0) + 3.0 * std::log(4.0);
  const double con = 1.0 + 0.0 + 0.25 + 0.0;
  const auto breakdown = evaluate_loss(outputs, labels, &pairs, cfg);
  CHECK(breakdown.cross_entropy == doctest::Approx(ce).epsilon(1e-12));
  CHECK(breakdown.contrastive == doctest::Approx(con).epsilon(1e-12));
  CHECK(std::abs(breakdown.total - (0.5 * ce + 0.5 * con)) <= 1e-9);
}

TEST_CASE("reductions are exact") {
  const auto b = make_batch(3, 6);
  PairedRepresentations pairs{b.partner_reps, b.partner_labels};
  std::vector<std::vector<double>> probs;
  for (const auto& o : b.outputs) probs.push_back(o.class_probs);
  const double ce = cross_entropy(probs, b.labels);

  LossConfig cfg;
  cfg.gamma = 1.0;
  CHECK(total_loss(b.outputs, b.labels, &pairs, cfg) == ce);
  CHECK(total_loss(b.outputs, b.labels, nullptr, cfg) == ce);
  cfg.gamma = 0.5;
  cfg.pairing_mode = PairingMode::kNone;
  CHECK(total_loss(b.outputs, b.labels, nullptr, cfg) == ce);

  cfg.gamma = 0.0;
  cfg.pairing_mode = PairingMode::kRandomAll;
  double con = 0.0;
  for (std::size_t i = 0; i < b.outputs.size(); ++i) {
    con += contrastive(b.outputs[i].representation, b.partner_reps[i], cfg.margin);
  }
  CHECK(total_loss(b.outputs, b.labels, &pairs, cfg) == con);

  // Partners beyond the margin leave nothing at gamma 0.
  auto far = b.partner_reps;
  for (auto& r : far) r[0] += 10.0;
  PairedRepresentations far_pairs{far, b.partner_labels};
  CHECK(total_loss(b.outputs, b.labels, &far_pairs, cfg) == 0.0);
}

TEST_CASE("loss is nonnegative") {
  Rng rng(5);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto b = make_batch(seed, 1 + seed % 5);
    PairedRepresentations pairs{b.partner_reps, b.partner_labels};
    LossConfig cfg;
    cfg.gamma = rng.uniform01();
    cfg.margin = rng.uniform(0.1, 2.0);
    CHECK(total_loss(b.outputs, b.labels, &pairs, cfg) >= 0.0);
  }
}

TEST_CASE("pairing contract") {
  auto b = make_batch(9);
  LossConfig cfg;
  CHECK_THROWS_AS(total_loss(b.outputs, b.labels, nullptr, cfg), ConfigError);
  b.partner_labels[2] = b.labels[2];
  PairedRepresentations pairs{b.partner_reps, b.partner_labels};
  CHECK_THROWS_AS(total_loss(b.outputs, b.labels, &pairs, cfg), ContractViolation);
  b.partner_labels.pop_back();
  PairedRepresentations short_pairs{b.partner_reps, b.partner_labels};
  CHECK_THROWS_AS(total_loss(b.outputs, b.labels, &short_pairs, cfg), ContractViolation);
}

TEST_CASE("loss config validation") {
  LossConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.gamma = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.gamma = 0.5;
  cfg.margin = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK(pairing_mode_from_name("random-all") == PairingMode::kRandomAll);
  CHECK(pairing_mode_name(PairingMode::kHard) == "hard");
}

}  // namespace
}  // namespace dialogic
