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


#include "dialogic/hard_mining.h"

#include <cmath>
#include <map>

#include "doctest.h"
#include "oracles.h"

namespace dialogic {
namespace {

PoolObservation obs(const std::string& uid, std::size_t label, bool misclassified) {
  PoolObservation o;
  o.uid = uid;
  o.label = label;
  o.misclassified = misclassified;
  o.representation = {0.0};
  return o;
}

std::vector<double> one_hot_probs(std::size_t n, std::size_t hot) {
  std::vector<double> p(n, 0.0);
  p[hot] = 1.0;
  return p;
}

TEST_CASE("discover_hard basic cases") {
  const std::vector<std::size_t> labels = {0, 1, 2, 0};
  std::vector<std::vector<double>> probs = {one_hot_probs(3, 0), one_hot_probs(3, 1),
                                            one_hot_probs(3, 2), one_hot_probs(3, 0)};
  CHECK(discover_hard(labels, probs).empty());
  probs[1] = one_hot_probs(3, 0);
  probs[3] = one_hot_probs(3, 2);
  CHECK(discover_hard(labels, probs) == std::vector<std::size_t>{1, 3});
}

TEST_CASE("discover_hard equals the brute-force scan on every small batch") {
  // Probability vectors drawn from a grid that includes two- and three-way ties.
  const std::vector<std::vector<double>> grid = {
      {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {0.5, 0.5, 0.0},
      {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, {0.2, 0.4, 0.4}};
  std::size_t checked = 0;
  for (std::size_t size = 1; size <= 3; ++size) {
    std::size_t combos = 1;
    for (std::size_t k = 0; k < size; ++k) combos *= 3 * grid.size();
    for (std::size_t code = 0; code < combos; ++code) {
      std::vector<std::size_t> labels;
      std::vector<std::vector<double>> probs;
      std::size_t rest = code;
      for (std::size_t k = 0; k < size; ++k) {
        labels.push_back(rest % 3);
        rest /= 3;
        probs.push_back(grid[rest % grid.size()]);
        rest /= grid.size();
      }
      CHECK(discover_hard(labels, probs) == oracle::misclassified(labels, probs));
      ++checked;
    }
  }
  CHECK(checked == 24 + 576 + 13824);
}

TEST_CASE("argmax ties resolve to the lowest index") {
  const std::vector<std::vector<double>> probs = {{0.4, 0.4, 0.2}};
  CHECK(discover_hard(std::vector<std::size_t>{0}, probs).empty());
  CHECK(discover_hard(std::vector<std::size_t>{1}, probs) == std::vector<std::size_t>{0});
}

TEST_CASE("pool insertion and capacity") {
  HardPool pool(10);
  pool.update(std::vector<PoolObservation>{obs("a", 0, true), obs("b", 1, true), obs("c", 2, true)});
  CHECK(pool.size() == 3);

  HardPool full(4);
  full.update(std::vector<PoolObservation>{obs("o1", 0, true), obs("o2", 0, true),
                                           obs("o3", 0, true), obs("o4", 0, true)});
  CHECK(full.size() == 4);
  full.update(std::vector<PoolObservation>{obs("n1", 1, true), obs("n2", 1, true), obs("n3", 1, true),
                                           obs("n4", 1, true), obs("n5", 1, true)});
  CHECK(full.size() == 4);
  for (const char* uid : {"n2", "n3", "n4", "n5"}) CHECK(full.contains(uid));
  for (const char* uid : {"o1", "o2", "o3", "o4", "n1"}) CHECK_FALSE(full.contains(uid));
}

TEST_CASE("stale entries are evicted first") {
  HardPool pool(3);
  pool.update(std::vector<PoolObservation>{obs("old", 0, true)});
  pool.update(std::vector<PoolObservation>{obs("mid", 0, true)});
  pool.update(std::vector<PoolObservation>{obs("new", 0, true)});
  pool.update(std::vector<PoolObservation>{obs("old", 0, true), obs("x", 1, true)});
  // "old" was re-observed, so "mid" is now the stalest.
  CHECK(pool.size() == 3);
  CHECK(pool.contains("old"));
  CHECK_FALSE(pool.contains("mid"));
  CHECK(pool.contains("new"));
  CHECK(pool.contains("x"));
}

TEST_CASE("entries predicted correctly are removed") {
  HardPool pool(10);
  pool.update(std::vector<PoolObservation>{obs("a", 0, true), obs("b", 1, true)});
  pool.update(std::vector<PoolObservation>{obs("a", 0, false)});
  CHECK_FALSE(pool.contains("a"));
  CHECK(pool.contains("b"));
  CHECK(pool.size() == 1);
}

TEST_CASE("per-batch cadence keeps only the latest batch") {
  HardPool pool(10, PoolCadence::kPerBatch);
  pool.update(std::vector<PoolObservation>{obs("a", 0, true), obs("b", 1, true)});
  pool.update(std::vector<PoolObservation>{obs("c", 2, true), obs("d", 2, false)});
  CHECK(pool.size() == 1);
  CHECK(pool.contains("c"));
}

TEST_CASE("pool never holds an entry last seen correct") {
  Rng rng(17);
  HardPool pool(6);
  std::map<std::string, bool> last_seen;
  for (int step = 0; step < 500; ++step) {
    std::vector<PoolObservation> batch;
    for (int k = 0; k < 4; ++k) {
      const std::string uid = "u" + std::to_string(rng.uniform_index(15));
      bool duplicate = false;
      for (const auto& o : batch) duplicate |= o.uid == uid;
      if (duplicate) continue;
      const bool wrong = rng.uniform01() < 0.4;
      batch.push_back(obs(uid, rng.uniform_index(3), wrong));
      last_seen[uid] = wrong;
    }
    pool.update(batch);
    CHECK(pool.size() <= pool.capacity());
    for (const auto& e : pool.entries()) CHECK(last_seen[e.uid]);
  }
}

TrainingIndex index_of(const std::vector<std::size_t>& labels, std::size_t n_classes = 3) {
  std::vector<std::string> uids;
  for (std::size_t i = 0; i < labels.size(); ++i) uids.push_back("t" + std::to_string(i));
  return TrainingIndex(uids, labels, n_classes);
}

TEST_CASE("empty pool falls back for every anchor") {
  const auto index = index_of({0, 0, 1, 1, 2, 2, 2});
  HardPool pool(8);
  Rng rng(3);
  SamplingStats stats;
  const std::vector<std::size_t> anchors = {0, 1, 2, 0, 2};
  const auto pairs = sample_partners(pool, anchors, index, rng, &stats);
  REQUIRE(pairs.partners.size() == anchors.size());
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    CHECK_FALSE(pairs.partners[i].from_pool);
    CHECK(pairs.partners[i].label != anchors[i]);
    CHECK(index.label(pairs.partners[i].example_index) == pairs.partners[i].label);
  }
  CHECK(stats.fallbacks == anchors.size());
  CHECK(stats.pool_hits == 0);
}

TEST_CASE("same-label pool entries force a per-anchor fallback") {
  const auto index = index_of({0, 0, 1, 1, 2, 2});
  HardPool pool(8);
  PoolObservation p = obs("t0", 0, true);
  p.example_index = 0;
  pool.update(std::vector<PoolObservation>{p});
  Rng rng(4);
  SamplingStats stats;
  const std::vector<std::size_t> anchors = {0, 1, 2};
  const auto pairs = sample_partners(pool, anchors, index, rng, &stats);
  CHECK_FALSE(pairs.partners[0].from_pool);
  CHECK(pairs.partners[0].label != 0);
  CHECK(pairs.partners[1].from_pool);
  CHECK(pairs.partners[1].uid == "t0");
  CHECK(pairs.partners[2].from_pool);
  CHECK(stats.pool_hits == 2);
  CHECK(stats.fallbacks == 1);
}

TEST_CASE("pool sampling is uniform over eligible entries") {
  const auto index = index_of({0, 1, 1, 1, 2});
  HardPool pool(8);
  std::vector<PoolObservation> batch;
  for (std::size_t i : {1u, 2u, 3u}) {
    PoolObservation o = obs("t" + std::to_string(i), 1, true);
    o.example_index = i;
    batch.push_back(o);
  }
  PoolObservation same = obs("t0", 0, true);
  batch.push_back(same);
  pool.update(batch);
  Rng rng(99);
  std::map<std::string, int> counts;
  const std::size_t draws = 10000;
  for (std::size_t k = 0; k < draws; ++k) {
    const auto pairs = sample_partners(pool, std::vector<std::size_t>{0}, index, rng);
    REQUIRE(pairs.partners[0].from_pool);
    ++counts[pairs.partners[0].uid];
  }
  CHECK(counts.size() == 3);
  for (const auto& [uid, n] : counts) {
    CHECK(std::abs(static_cast<double>(n) / draws - 1.0 / 3.0) <= 0.03);
  }
}

TEST_CASE("sampling is deterministic given the seed") {
  const auto index = index_of({0, 1, 2, 0, 1, 2, 0, 1, 2});
  HardPool pool(8);
  const std::vector<std::size_t> anchors = {0, 1, 2, 2, 1, 0};
  Rng a(5), b(5);
  const auto pa = sample_partners(pool, anchors, index, a);
  const auto pb = sample_partners(pool, anchors, index, b);
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    CHECK(pa.partners[i].example_index == pb.partners[i].example_index);
  }
}

TEST_CASE("single-class training set is degenerate") {
  const auto index = index_of({1, 1, 1});
  HardPool pool(4);
  Rng rng(1);
  CHECK_THROWS_AS(sample_partners(pool, std::vector<std::size_t>{1}, index, rng),
                  DegenerateDatasetError);
}

}  // namespace
}  // namespace dialogic
