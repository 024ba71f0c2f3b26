// Copyright 2026 The moraldir Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "moraldir/parallel_divergence.hpp"
#include "support/fixtures.hpp"

namespace moraldir::testing {

// Model whose score of (x, y) is exactly x: direction e1, mean 0, normalizer 1.
inline MoralDirectionModel AxisModel() {
  return Induce({{"good", {1.0, 0.0}}, {"bad", {-1.0, 0.0}}},
                {{"good", Polarity::kPositive}, {"bad", Polarity::kNegative}}, Manifest(2));
}

struct DivergenceCorpus {
  MoralDirectionModel model_a = AxisModel();
  MoralDirectionModel model_b = AxisModel();
  EmbeddingSet set_a = EmbeddingSet::Create(Manifest(2, "model-a", "de"), {});
  EmbeddingSet set_b = EmbeddingSet::Create(Manifest(2, "model-b", "en"), {});
  std::vector<ParallelPair> pairs;
};

// Quality uniform on [0, 1]. Good pairs (quality >= q0) get small deltas with
// a weak quality trend; poor pairs get large positive deltas, so the
// delta-quality correlation is strongly negative before filtering.
inline DivergenceCorpus MakeDivergenceCorpus(std::size_t n = 1000, double q0 = 0.5,
                                             std::uint64_t seed = 4242) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  DivergenceCorpus c;
  std::vector<EmbeddingRecord> a, b;
  for (std::size_t i = 0; i < n; ++i) {
    const double quality = uniform(rng);
    const double score_a = 0.3 * normal(rng);
    double delta = 0.1 * normal(rng) + 0.1 * (1.0 - quality);
    if (quality < q0) delta += 0.5 + 0.5 * std::abs(normal(rng));
    const std::string id = "p" + std::to_string(i);
    a.push_back({id + ":a", "text a " + id, {score_a, normal(rng)}});
    b.push_back({id + ":b", "text b " + id, {score_a - delta, normal(rng)}});
    c.pairs.push_back(
        ParallelPair{id, {"de", "text a " + id, id + ":a"}, {"en", "text b " + id, id + ":b"},
                     quality});
  }
  c.set_a = EmbeddingSet::Create(Manifest(2, "model-a", "de"), std::move(a));
  c.set_b = EmbeddingSet::Create(Manifest(2, "model-b", "en"), std::move(b));
  return c;
}

}  // namespace moraldir::testing
