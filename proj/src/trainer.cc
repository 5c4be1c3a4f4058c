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


#include "docre/trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "docre/errors.h"
#include "docre/optimizer.h"
#include "json.hpp"

namespace docre {

using json = nlohmann::json;

void TrainConfig::Validate() const {
  if (epochs < 1) throw ArgumentError("epochs must be >= 1");
  if (batch_size < 1) throw ArgumentError("batch_size must be >= 1");
  if (!(lr > 0.0)) throw ArgumentError("lr must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ArgumentError("Adam betas must lie in [0, 1)");
  }
  if (!(eps > 0.0)) throw ArgumentError("eps must be positive");
  if (patience < 0) throw ArgumentError("patience must be >= 0");
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw ArgumentError("threshold must lie in [0, 1]");
  if (min_count < 1) throw ArgumentError("min_count must be >= 1");
}

std::string TrainConfig::ToJson() const {
  json j = {{"epochs", epochs},       {"batch_size", batch_size}, {"seed", seed},
            {"lr", lr},               {"beta1", beta1},           {"beta2", beta2},
            {"eps", eps},             {"max_pairs", max_pairs},   {"patience", patience},
            {"threshold", threshold}, {"min_count", min_count}};
  return j.dump();
}

TrainConfig TrainConfig::FromJson(const std::string &text) {
  TrainConfig c;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception &e) {
    throw ArgumentError(std::string("train config is not valid JSON: ") + e.what());
  }
  static const std::vector<std::string> kKnown = {"epochs", "batch_size", "seed",     "lr",
                                                  "beta1",  "beta2",      "eps",      "max_pairs",
                                                  "patience", "threshold", "min_count"};
  for (const auto &[key, _] : j.items()) {
    if (std::find(kKnown.begin(), kKnown.end(), key) == kKnown.end()) {
      throw ArgumentError("unknown train config key: " + key);
    }
  }
  try {
    c.epochs = j.value("epochs", c.epochs);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.seed = j.value("seed", c.seed);
    c.lr = j.value("lr", c.lr);
    c.beta1 = j.value("beta1", c.beta1);
    c.beta2 = j.value("beta2", c.beta2);
    c.eps = j.value("eps", c.eps);
    c.max_pairs = j.value("max_pairs", c.max_pairs);
    c.patience = j.value("patience", c.patience);
    c.threshold = j.value("threshold", c.threshold);
    c.min_count = j.value("min_count", c.min_count);
  } catch (const json::exception &e) {
    throw ArgumentError(std::string("bad train config value: ") + e.what());
  }
  return c;
}

std::string TrainResult::LogText() const {
  std::string out;
  char buf[128];
  for (const EpochLog &e : log) {
    std::snprintf(buf, sizeof(buf), "epoch %d loss %.17g dev_f1 %.17g\n", e.epoch, e.train_loss,
                  e.dev_f1);
    out += buf;
  }
  return out;
}

namespace {

// All positive pairs plus seeded negatives up to `cap`, in canonical order.
std::vector<std::pair<int, int>> SamplePairs(const Document &doc, size_t cap, uint64_t seed) {
  auto all = AllOrderedPairs(doc.entities.size());
  if (cap == 0 || all.size() <= cap) return all;
  std::set<std::pair<int, int>> positive;
  for (const RelationFact &f : doc.facts) positive.insert({f.head, f.tail});
  std::vector<std::pair<int, int>> keep(positive.begin(), positive.end()), negatives;
  for (const auto &p : all) {
    if (!positive.count(p)) negatives.push_back(p);
  }
  std::mt19937_64 rng(seed);
  std::shuffle(negatives.begin(), negatives.end(), rng);
  for (size_t i = 0; i < negatives.size() && keep.size() < cap; ++i) keep.push_back(negatives[i]);
  std::sort(keep.begin(), keep.end());
  return keep;
}

DocumentScores ScoreDocument(const Model &model, const Vocabulary &vocab, const Document &doc) {
  DocumentScores out;
  if (doc.entities.size() < 2) return out;
  PreparedDocument prepared = model.Prepare(doc, vocab);
  Graph g;
  ForwardResult fr = model.Forward(g, prepared);
  out.pairs = prepared.pairs;
  out.probs = g.value(fr.probs);
  return out;
}

void RethrowFirst(const std::vector<std::exception_ptr> &errors) {
  for (const auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

TrainResult Train(const Corpus &train, const Corpus &dev, const ModelConfig &model_config,
                  const TrainConfig &config, const EpochObserver &observer) {
  config.Validate();
  if (!dev.documents.empty() && !(train.schema == dev.schema)) {
    throw ArgumentError("train and dev relation schemas differ");
  }
  if (train.schema.count() == 0) throw ArgumentError("training corpus has an empty schema");
  ModelConfig mc = model_config;
  mc.n_relations = static_cast<int>(train.schema.count());
  mc.Validate();

  TrainResult result;
  result.vocab = Vocabulary::Build(train, config.min_count);
  result.model = std::make_unique<Model>(mc, result.vocab.size());
  Model &model = *result.model;

  std::vector<PreparedDocument> prepared;
  for (size_t i = 0; i < train.documents.size(); ++i) {
    const Document &doc = train.documents[i];
    if (doc.entities.size() < 2) continue;
    auto pairs = SamplePairs(doc, config.max_pairs, config.seed * 1000003ULL + i);
    prepared.push_back(model.Prepare(doc, result.vocab, &pairs));
  }
  if (prepared.empty()) throw DataError("no training document has two or more entities");

  Adam adam({config.lr, config.beta1, config.beta2, config.eps});
  std::mt19937_64 rng(config.seed);
  std::vector<size_t> order(prepared.size());
  std::iota(order.begin(), order.end(), 0);

  ParamRegistry best = model.params();
  double best_score = -std::numeric_limits<double>::infinity();
  int since_best = 0;
  const size_t bs = static_cast<size_t>(config.batch_size);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    for (size_t start = 0; start < order.size(); start += bs) {
      const size_t n = std::min(bs, order.size() - start);
      std::vector<GradientMap> grads(n);
      std::vector<double> losses(n, 0.0);
      std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic) if (n > 1)
      for (size_t k = 0; k < n; ++k) {
        try {
          Graph g;
          Var loss = model.Loss(g, prepared[order[start + k]]);
          losses[k] = g.value(loss)[0];
          g.Backward(loss);
          grads[k] = g.ParamGradients(model.params());
        } catch (...) {
          errors[k] = std::current_exception();
        }
      }
      RethrowFirst(errors);
      GradientMap total = GradientMap::ZerosLike(model.params());
      for (size_t k = 0; k < n; ++k) {
        if (!std::isfinite(losses[k])) {
          throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + " on document '" +
                             prepared[order[start + k]].title + "'");
        }
        loss_sum += losses[k];
        total.Accumulate(grads[k], 1.0 / static_cast<double>(n));
      }
      model.params().SetGradients(total);
      adam.Step(model.params());
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = loss_sum / static_cast<double>(prepared.size());
    double score = -entry.train_loss;
    if (!dev.documents.empty()) {
      entry.dev_f1 = Evaluate(model, result.vocab, dev, config.threshold).metrics.f1();
      score = entry.dev_f1;
    }
    result.log.push_back(entry);
    if (observer) observer(entry);
    if (score > best_score) {
      best_score = score;
      best = model.params();
      result.best_epoch = epoch;
      since_best = 0;
    } else if (config.patience > 0 && ++since_best >= config.patience) {
      break;
    }
  }
  model.params().CopyValuesFrom(best);
  return result;
}

std::vector<DocumentScores> ScoreCorpus(const Model &model, const Vocabulary &vocab,
                                        const Corpus &corpus) {
  const size_t n = corpus.documents.size();
  std::vector<DocumentScores> out(n);
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic)
  for (size_t i = 0; i < n; ++i) {
    try {
      out[i] = ScoreDocument(model, vocab, corpus.documents[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  RethrowFirst(errors);
  return out;
}

std::vector<DocumentScores> ScoreCorpusSerial(const Model &model, const Vocabulary &vocab,
                                              const Corpus &corpus) {
  std::vector<DocumentScores> out;
  out.reserve(corpus.documents.size());
  for (const Document &doc : corpus.documents) out.push_back(ScoreDocument(model, vocab, doc));
  return out;
}

PredictionSet Decode(const std::vector<DocumentScores> &scores, double threshold) {
  PredictionSet set;
  set.threshold = threshold;
  for (size_t d = 0; d < scores.size(); ++d) {
    const DocumentScores &s = scores[d];
    for (size_t p = 0; p < s.pairs.size(); ++p) {
      for (size_t r = 0; r < s.probs.cols(); ++r) {
        const double v = s.probs(p, r);
        if (v >= threshold) {
          set.triples.push_back(
              {{d, s.pairs[p].first, s.pairs[p].second, static_cast<int>(r)}, v});
        }
      }
    }
  }
  return set;
}

std::vector<ScoredCandidate> Candidates(const std::vector<DocumentScores> &scores,
                                        const Corpus &corpus, size_t *num_gold) {
  if (scores.size() != corpus.documents.size()) {
    throw ArgumentError("score list does not match the corpus");
  }
  std::vector<ScoredCandidate> out;
  size_t gold_total = 0;
  for (size_t d = 0; d < scores.size(); ++d) {
    const Document &doc = corpus.documents[d];
    std::set<std::tuple<int, int, int>> gold;
    for (const RelationFact &f : doc.facts) gold.insert({f.head, f.tail, f.relation});
    gold_total += gold.size();
    const DocumentScores &s = scores[d];
    for (size_t p = 0; p < s.pairs.size(); ++p) {
      for (size_t r = 0; r < s.probs.cols(); ++r) {
        const bool g = gold.count({s.pairs[p].first, s.pairs[p].second, static_cast<int>(r)}) > 0;
        out.push_back({s.probs(p, r), g});
      }
    }
  }
  if (num_gold) *num_gold = gold_total;
  return out;
}

Evaluation Evaluate(const Model &model, const Vocabulary &vocab, const Corpus &corpus,
                    double threshold, const FactSet *train_facts) {
  if (static_cast<size_t>(model.config().n_relations) != corpus.schema.count()) {
    throw ArgumentError("model predicts " + std::to_string(model.config().n_relations) +
                        " relations but the corpus schema has " +
                        std::to_string(corpus.schema.count()));
  }
  Evaluation ev;
  ev.predictions = Decode(ScoreCorpus(model, vocab, corpus), threshold);
  std::vector<Triple> triples;
  triples.reserve(ev.predictions.triples.size());
  for (const ScoredTriple &t : ev.predictions.triples) triples.push_back(t.triple);
  MetricsOptions opts;
  opts.train_facts = train_facts;
  opts.ignore_train_facts = train_facts != nullptr;
  ev.metrics = ComputeMetrics(corpus, triples, opts);
  return ev;
}

const std::vector<AblationVariant> &AblationVariants() {
  static const std::vector<AblationVariant> kVariants = [] {
    std::vector<AblationVariant> v;
    AblationFlags f;
    v.push_back({"full", "GRACR", f});
    f = {};
    f.use_aggregation = false;
    f.use_reasoning = false;
    v.push_back({"no_both", "w/o both module", f});
    f = {};
    f.use_reasoning = false;
    v.push_back({"no_reasoning", "w/o reasoning module", f});
    f = {};
    f.use_aggregation = false;
    v.push_back({"no_aggregation", "w/o aggregation module", f});
    f = {};
    f.use_logic_edges = false;
    v.push_back({"no_logic_edges", "w/o reasoning edge", f});
    f = {};
    f.use_intra_edges = false;
    v.push_back({"no_intra_edges", "w/o intra-sentence edge", f});
    return v;
  }();
  return kVariants;
}

const AblationVariant &FindAblationVariant(const std::string &key) {
  for (const AblationVariant &v : AblationVariants()) {
    if (v.key == key) return v;
  }
  throw ArgumentError("unknown ablation variant: " + key);
}

std::vector<AblationRow> RunAblation(const Corpus &train, const Corpus &dev,
                                     const ModelConfig &base, const TrainConfig &config,
                                     const std::vector<std::string> &keys) {
  for (const std::string &k : keys) FindAblationVariant(k);  // validate up front
  const FactSet train_facts = CollectFacts(train);
  std::vector<AblationRow> rows;
  for (const AblationVariant &v : AblationVariants()) {
    if (!keys.empty() && std::find(keys.begin(), keys.end(), v.key) == keys.end()) continue;
    ModelConfig mc = base;
    mc.flags = v.flags;
    TrainResult tr = Train(train, dev, mc, config);
    rows.push_back({v, Evaluate(*tr.model, tr.vocab, dev, config.threshold, &train_facts).metrics});
  }
  return rows;
}

std::string AblationTable(const std::vector<AblationRow> &rows) {
  std::string out;
  char buf[200];
  std::snprintf(buf, sizeof(buf), "%-26s %8s %8s %8s %8s\n", "Model", "Ign F1", "F1", "Intra",
                "Inter");
  out += buf;
  for (const AblationRow &r : rows) {
    std::snprintf(buf, sizeof(buf), "%-26s %8.2f %8.2f %8.2f %8.2f\n", r.variant.label.c_str(),
                  100.0 * r.metrics.ign_f1(), 100.0 * r.metrics.f1(), 100.0 * r.metrics.intra_f1(),
                  100.0 * r.metrics.inter_f1());
    out += buf;
  }
  return out;
}

std::string AblationJson(const std::vector<AblationRow> &rows) {
  json arr = json::array();
  for (const AblationRow &r : rows) {
    arr.push_back({{"key", r.variant.key},
                   {"label", r.variant.label},
                   {"metrics", json::parse(r.metrics.ToJson())}});
  }
  return arr.dump(2);
}

}  // namespace docre
