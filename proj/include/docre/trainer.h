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

#ifndef DOCRE_TRAINER_H_
#define DOCRE_TRAINER_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "docre/corpus.h"
#include "docre/encoder.h"
#include "docre/metrics.h"
#include "docre/model.h"

namespace docre {

struct TrainConfig {
  int epochs = 200;
  int batch_size = 1;  // documents per optimizer step
  uint64_t seed = 1;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  size_t max_pairs = 0;  // per document; 0 = unlimited
  int patience = 0;      // epochs without dev improvement before stopping; 0 = off
  double threshold = 0.5;
  int min_count = 1;  // vocabulary threshold

  // Throws ArgumentError if epochs or batch_size is < 1.
  void Validate() const;
  std::string ToJson() const;
  static TrainConfig FromJson(const std::string &text);
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;  // mean summed-BCE per document
  double dev_f1 = 0.0;
};

struct TrainResult {
  std::unique_ptr<Model> model;  // best dev epoch
  Vocabulary vocab;
  std::vector<EpochLog> log;
  int best_epoch = 0;

  std::string LogText() const;
};

// Epoch callback, e.g. for progress output.
using EpochObserver = std::function<void(const EpochLog &)>;

// Adam over seed-shuffled documents. Per batch the loss is summed over every
// ordered pair of each document and averaged over the batch's documents;
// documents with fewer than two entities are skipped. The parameters of the
// epoch with the best dev F1 (at config.threshold) are kept; without dev
// documents the lowest training loss decides. Throws ArgumentError when the
// schemas differ, NumericError on a non-finite loss.
TrainResult Train(const Corpus &train, const Corpus &dev, const ModelConfig &model_config,
                  const TrainConfig &config, const EpochObserver &observer = {});

// Probabilities for every scored pair of one document.
struct DocumentScores {
  std::vector<std::pair<int, int>> pairs;
  Tensor probs;  // pairs x |R|; empty for documents with < 2 entities
};

// Scores all documents, in parallel across documents.
std::vector<DocumentScores> ScoreCorpus(const Model &model, const Vocabulary &vocab,
                                        const Corpus &corpus);
// Single-threaded reference of ScoreCorpus.
std::vector<DocumentScores> ScoreCorpusSerial(const Model &model, const Vocabulary &vocab,
                                              const Corpus &corpus);

// Triples with probability >= threshold, in document/pair/relation order.
PredictionSet Decode(const std::vector<DocumentScores> &scores, double threshold);

// Every (pair, relation) score labelled with its gold status.
std::vector<ScoredCandidate> Candidates(const std::vector<DocumentScores> &scores,
                                        const Corpus &corpus, size_t *num_gold);

struct Evaluation {
  Metrics metrics;
  PredictionSet predictions;
};

Evaluation Evaluate(const Model &model, const Vocabulary &vocab, const Corpus &corpus,
                    double threshold, const FactSet *train_facts = nullptr);

struct AblationVariant {
  std::string key;    // command-line name
  std::string label;  // table row label
  AblationFlags flags;
};

// Variants in table row order: full model, without both modules, without
// the reasoning module, without the aggregation module, without logical
// reasoning edges, without intra-sentence edges.
const std::vector<AblationVariant> &AblationVariants();
// Throws ArgumentError for unknown keys.
const AblationVariant &FindAblationVariant(const std::string &key);

struct AblationRow {
  AblationVariant variant;
  Metrics metrics;
};

// Trains and evaluates each named variant (all when `keys` is empty) on the
// same data; rows come back in table order.
std::vector<AblationRow> RunAblation(const Corpus &train, const Corpus &dev,
                                     const ModelConfig &base, const TrainConfig &config,
                                     const std::vector<std::string> &keys = {});
std::string AblationTable(const std::vector<AblationRow> &rows);
std::string AblationJson(const std::vector<AblationRow> &rows);

}  // namespace docre

#endif  // DOCRE_TRAINER_H_
