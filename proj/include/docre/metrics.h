// Copyright 2026 The docre Authors.
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

#ifndef DOCRE_METRICS_H_
#define DOCRE_METRICS_H_

#include <cstddef>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "docre/corpus.h"

namespace docre {

// A relation triple within one document of a corpus.
struct Triple {
  size_t doc = 0;
  int head = 0;
  int tail = 0;
  int relation = 0;

  auto operator<=>(const Triple &) const = default;
};

struct ScoredTriple {
  Triple triple;
  double score = 0.0;
};

// Emitted triples and the threshold that produced them.
struct PredictionSet {
  std::vector<ScoredTriple> triples;
  double threshold = 0.5;

  // One {"title", "h_idx", "t_idx", "r", "score"} JSON object per line.
  std::string ToNdjson(const Corpus &corpus) const;
};

struct Counts {
  size_t tp = 0;
  size_t fp = 0;
  size_t fn = 0;

  double precision() const;
  double recall() const;
  // 2PR / (P + R), 0 when P + R = 0.
  double f1() const;
};

struct Metrics {
  Counts all;
  Counts ign;
  Counts intra;
  Counts inter;
  bool has_ign = false;

  double precision() const { return all.precision(); }
  double recall() const { return all.recall(); }
  double f1() const { return all.f1(); }
  double ign_f1() const { return ign.f1(); }
  double intra_f1() const { return intra.f1(); }
  double inter_f1() const { return inter.f1(); }

  std::string ToText() const;
  std::string ToJson() const;
};

// Cross-document fact identity: (head name, tail name, relation), where an
// entity's name is the surface of its first mention.
using FactKey = std::tuple<std::string, std::string, int>;
using FactSet = std::set<FactKey>;

FactSet CollectFacts(const Corpus &corpus);

struct MetricsOptions {
  // Ign F1 drops every gold and predicted triple whose key is in this set.
  // Required when `ignore_train_facts` is set.
  const FactSet *train_facts = nullptr;
  bool ignore_train_facts = false;
};

// Micro P/R/F1 over triples. Intra counts restrict gold and predictions to
// pairs whose entities share a sentence, inter counts to the rest. Duplicate
// predictions are counted once. Throws ArgumentError when Ign F1 is requested
// without train facts.
Metrics ComputeMetrics(const Corpus &gold, const std::vector<Triple> &predicted,
                       const MetricsOptions &options = {});

struct ScoredCandidate {
  double score = 0.0;
  bool gold = false;
};

// Scans thresholds step, 2 step, ... below 1 and returns the one with the
// best micro F1 (predict when score >= threshold); ties go to the smallest.
// `num_gold` counts gold triples, including any absent from `candidates`.
// Throws ArgumentError for empty input or a step outside (0, 1).
double TuneThreshold(const std::vector<ScoredCandidate> &candidates, size_t num_gold,
                     double step);

}  // namespace docre

#endif  // DOCRE_METRICS_H_
