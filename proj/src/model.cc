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

#include "docre/model.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>

#include "docre/errors.h"
#include "json.hpp"

namespace docre {

using json = nlohmann::json;

void ModelConfig::Validate() const {
  if (d_w < 1 || d_t < 1 || d_dist < 1 || n_relations < 1 || max_len < 1) {
    throw ArgumentError("model dimensions must all be >= 1");
  }
  if (layers < 1) throw ArgumentError("model needs at least one R-GCN layer");
}

std::string ModelConfig::ToJson() const {
  json j = {{"d_w", d_w},
            {"d_t", d_t},
            {"d_dist", d_dist},
            {"layers", layers},
            {"n_relations", n_relations},
            {"max_len", max_len},
            {"use_aggregation", flags.use_aggregation},
            {"use_reasoning", flags.use_reasoning},
            {"use_intra_edges", flags.use_intra_edges},
            {"use_logic_edges", flags.use_logic_edges},
            {"literal_attention", literal_attention},
            {"context_includes_target", context_includes_target},
            {"seed", seed}};
  return j.dump();
}

ModelConfig ModelConfig::FromJson(const std::string &text) {
  ModelConfig c;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception &e) {
    throw ArgumentError(std::string("model config is not valid JSON: ") + e.what());
  }
  static const std::vector<std::string> kKnown = {
      "d_w", "d_t", "d_dist", "layers", "n_relations", "max_len", "use_aggregation",
      "use_reasoning", "use_intra_edges", "use_logic_edges", "literal_attention",
      "context_includes_target", "seed"};
  for (const auto &[key, _] : j.items()) {
    if (std::find(kKnown.begin(), kKnown.end(), key) == kKnown.end()) {
      throw ArgumentError("unknown model config key: " + key);
    }
  }
  try {
    c.d_w = j.value("d_w", c.d_w);
    c.d_t = j.value("d_t", c.d_t);
    c.d_dist = j.value("d_dist", c.d_dist);
    c.layers = j.value("layers", c.layers);
    c.n_relations = j.value("n_relations", c.n_relations);
    c.max_len = j.value("max_len", c.max_len);
    c.flags.use_aggregation = j.value("use_aggregation", c.flags.use_aggregation);
    c.flags.use_reasoning = j.value("use_reasoning", c.flags.use_reasoning);
    c.flags.use_intra_edges = j.value("use_intra_edges", c.flags.use_intra_edges);
    c.flags.use_logic_edges = j.value("use_logic_edges", c.flags.use_logic_edges);
    c.literal_attention = j.value("literal_attention", c.literal_attention);
    c.context_includes_target = j.value("context_includes_target", c.context_includes_target);
    c.seed = j.value("seed", c.seed);
  } catch (const json::exception &e) {
    throw ArgumentError(std::string("bad model config value: ") + e.what());
  }
  return c;
}

int DistanceBucket(long delta) {
  const long a = std::labs(delta);
  int b;
  if (a <= 2) {
    b = static_cast<int>(a);
  } else if (a <= 4) {
    b = 3;
  } else if (a <= 8) {
    b = 4;
  } else if (a <= 16) {
    b = 5;
  } else if (a <= 32) {
    b = 6;
  } else if (a <= 64) {
    b = 7;
  } else {
    b = 8;
  }
  return delta < 0 ? -b : b;
}

RgcnParams RgcnParams::Register(ParamRegistry &registry, const std::string &prefix,
                                std::vector<EdgeType> types, int dim, int layers,
                                uint64_t seed) {
  RgcnParams p;
  p.types = std::move(types);
  for (int l = 0; l < layers; ++l) {
    const std::string base = prefix + ".layer" + std::to_string(l) + ".";
    auto add = [&](const std::string &name) {
      return registry.Add(base + name, OrthogonalInit(dim, dim, ParamSeed(seed, base + name)))
          .index;
    };
    RgcnLayerParams layer;
    layer.self = add("self");
    for (EdgeType t : p.types) layer.per_type.push_back(add(EdgeTypeName(t)));
    p.layers.push_back(std::move(layer));
  }
  return p;
}

Var RgcnForward(Graph &graph, const ParamRegistry &registry, const RgcnParams &params,
                const std::vector<std::shared_ptr<const SparseRows>> &adjacency, Var nodes) {
  if (adjacency.size() != params.types.size()) {
    throw DimensionError("R-GCN: one adjacency per edge type expected");
  }
  Var x = nodes;
  for (const RgcnLayerParams &layer : params.layers) {
    const Tensor &w0 = registry.at(layer.self).value;
    CheckShape(graph.value(x).cols() == w0.rows(), "rgcn", graph.value(x), w0);
    Var acc = graph.MatMul(x, graph.Param(registry.at(layer.self)));
    for (size_t t = 0; t < params.types.size(); ++t) {
      if (adjacency[t]->rows != graph.value(x).rows()) {
        throw DimensionError("R-GCN: adjacency does not match node count");
      }
      if (adjacency[t]->nnz() == 0) continue;
      Var agg = graph.SparseMatMul(adjacency[t], x);
      acc = graph.Add(acc, graph.MatMul(agg, graph.Param(registry.at(layer.per_type[t]))));
    }
    x = graph.Relu(acc);
  }
  return x;
}

Var AttentionFuse(Graph &graph, Var queries, Var w_query, Var keys, Var w_key, Var values,
                  Var w_value, double key_dim, bool literal) {
  if (graph.value(queries).rows() != graph.value(keys).rows() ||
      graph.value(keys).rows() != graph.value(values).rows()) {
    throw DimensionError("attention fusion: entity counts differ");
  }
  if (graph.value(queries).rows() == 0) throw ArgumentError("attention fusion over no entities");
  Var v = graph.MatMul(values, w_value);
  if (literal) return v;
  Var q = graph.MatMul(queries, w_query);
  Var k = graph.MatMul(keys, w_key);
  Var scores = graph.Scale(graph.MatMulTransB(q, k), 1.0 / std::sqrt(key_dim));
  return graph.MatMul(graph.RowSoftmax(scores), v);
}

Var ContextRepresentations(Graph &graph, Var pair_reps, Var w, bool include_target) {
  const size_t p = graph.value(pair_reps).rows();
  if (p == 0) throw ArgumentError("context pooling over zero pairs");
  if (!include_target && p == 1) return graph.Constant(Tensor(1, graph.value(pair_reps).cols()));
  // scores(r, i) = o_r W^T o_i^T = o_i W o_r^T
  Var scores = graph.MatMulTransB(graph.MatMulTransB(pair_reps, w), pair_reps);
  if (!include_target) {
    Tensor mask(p, p);
    for (size_t i = 0; i < p; ++i) mask(i, i) = -1e30;
    scores = graph.Add(scores, graph.Constant(std::move(mask)));
  }
  return graph.MatMul(graph.RowSoftmax(scores), pair_reps);
}

std::vector<std::pair<int, int>> AllOrderedPairs(size_t num_entities) {
  std::vector<std::pair<int, int>> pairs;
  for (size_t m = 0; m < num_entities; ++m) {
    for (size_t n = 0; n < num_entities; ++n) {
      if (m != n) pairs.emplace_back(static_cast<int>(m), static_cast<int>(n));
    }
  }
  return pairs;
}

Model::Model(const ModelConfig &config, size_t vocab_size)
    : config_(config), vocab_size_(vocab_size) {
  config_.Validate();
  if (vocab_size < 2) throw ArgumentError("vocabulary must hold the reserved entries");
  const uint64_t seed = config_.seed;
  const size_t dw = config_.d_w, dt = config_.d_t, dn = config_.d_n(), de = config_.d_e();
  const size_t dr = config_.d_r();
  EncoderConfig ec{config_.d_w, config_.max_len};
  encoder_ = EncoderParams::Register(registry_, vocab_size, ec, seed);

  auto gauss = [&](const std::string &name, size_t rows, size_t cols) {
    return registry_.Add(name, GaussianInit(rows, cols, 0.1, ParamSeed(seed, name))).index;
  };
  auto orth = [&](const std::string &name, size_t rows, size_t cols) {
    return registry_.Add(name, OrthogonalInit(rows, cols, ParamSeed(seed, name))).index;
  };
  auto zeros = [&](const std::string &name, size_t rows, size_t cols) {
    return registry_.Add(name, Tensor(rows, cols)).index;
  };

  types_.sentence = gauss("types.sentence", 1, dt);
  types_.mention = gauss("types.mention", 1, dt);
  types_.entity = gauss("types.entity", 1, dt);
  dlg_ = RgcnParams::Register(registry_, "dlg",
                              {EdgeType::kMentionMention, EdgeType::kMentionSentence,
                               EdgeType::kSentenceSentence},
                              config_.d_n(), config_.layers, seed);
  elg_ = RgcnParams::Register(registry_, "elg", {EdgeType::kIntra, EdgeType::kLogic},
                              config_.d_e(), config_.layers, seed);
  fusion_.w_pre = orth("fusion.pre", dn, dn);
  fusion_.w_h = orth("fusion.h", dw, dn);
  fusion_.w_dlg = orth("fusion.dlg", dn, dn);
  fusion_.w_elg = orth("fusion.elg", de, dn);
  classifier_.distance_embedding =
      gauss("classifier.distance_embedding", 2 * kMaxDistanceBucket + 1, config_.d_dist);
  classifier_.context = orth("classifier.context", dr, dr);
  classifier_.hidden_weight = orth("classifier.hidden.weight", 2 * dr, dr);
  classifier_.hidden_bias = zeros("classifier.hidden.bias", 1, dr);
  classifier_.output_weight = orth("classifier.output.weight", dr, config_.n_relations);
  classifier_.output_bias = zeros("classifier.output.bias", 1, config_.n_relations);
}

PreparedDocument Model::Prepare(const Document &doc, const Vocabulary &vocab,
                                const std::vector<std::pair<int, int>> *pairs) const {
  PreparedDocument p;
  p.title = doc.title;
  const DocumentGraph dlg = BuildDocumentGraph(doc);
  ElgOptions elg_options;
  elg_options.intra_edges = config_.flags.use_intra_edges;
  elg_options.logic_edges = config_.flags.use_logic_edges;
  const EntityGraph elg = BuildEntityGraph(doc, elg_options);

  p.token_ids = DocumentTokenIds(doc, vocab);
  if (p.token_ids.size() > static_cast<size_t>(config_.max_len)) {
    throw DataError("document '" + doc.title + "' has " + std::to_string(p.token_ids.size()) +
                    " tokens, more than max_len " + std::to_string(config_.max_len));
  }
  const auto offsets = doc.SentenceOffsets();
  for (size_t s = 0; s < doc.sentences.size(); ++s) {
    p.sentence_spans.emplace_back(offsets[s], offsets[s] + doc.sentences[s].size());
  }
  p.entity_mentions.resize(doc.entities.size());
  for (size_t m = 0; m < dlg.mentions.size(); ++m) {
    const MentionRef &r = dlg.mentions[m];
    p.mention_spans.emplace_back(offsets[r.sentence] + r.start, offsets[r.sentence] + r.end);
    p.entity_mentions[r.entity].push_back(static_cast<int>(m));
  }
  auto dlg_row = [&dlg](NodeRef n) { return dlg.Row(n); };
  for (EdgeType t : dlg_.types) {
    p.dlg_adjacency.push_back(NeighborMean(dlg.num_nodes(), dlg.edges, t, dlg_row));
  }
  auto elg_row = [](NodeRef n) { return n.index; };
  for (EdgeType t : elg_.types) {
    p.elg_adjacency.push_back(NeighborMean(elg.num_entities, elg.edges, t, elg_row));
  }
  for (size_t e = 0; e < doc.entities.size(); ++e) {
    p.first_position.push_back(static_cast<long>(doc.FirstMentionPosition(e)));
  }
  p.pairs = pairs ? *pairs : AllOrderedPairs(doc.entities.size());
  std::map<std::pair<int, int>, size_t> row_of;
  for (size_t i = 0; i < p.pairs.size(); ++i) {
    const auto [h, t] = p.pairs[i];
    if (h == t || h < 0 || t < 0 || static_cast<size_t>(h) >= doc.entities.size() ||
        static_cast<size_t>(t) >= doc.entities.size()) {
      throw ArgumentError("invalid entity pair for document '" + doc.title + "'");
    }
    row_of[p.pairs[i]] = i;
  }
  p.labels = Tensor(p.pairs.size(), config_.n_relations);
  for (const RelationFact &f : doc.facts) {
    if (f.relation < 0 || f.relation >= config_.n_relations) {
      throw DataError("document '" + doc.title + "' has a relation outside the model schema");
    }
    auto it = row_of.find({f.head, f.tail});
    if (it != row_of.end()) p.labels(it->second, f.relation) = 1.0;
  }
  return p;
}

ForwardResult Model::Forward(Graph &graph, const PreparedDocument &doc) const {
  const size_t ne = doc.num_entities();
  if (ne < 2 || doc.pairs.empty()) {
    throw ArgumentError("document '" + doc.title + "' has no entity pairs to score");
  }
  const ParamRegistry &reg = registry_;
  auto param = [&](size_t i) { return graph.Param(reg.at(i)); };
  ForwardResult r;
  EncoderConfig ec{config_.d_w, config_.max_len};
  r.hidden = Encode(graph, reg, encoder_, ec, doc.token_ids, doc.title);

  const size_t ns = doc.num_sentences(), nm = doc.mention_spans.size();
  Var sentence_means = graph.SegmentMean(r.hidden, doc.sentence_spans);
  Var mention_means = graph.SegmentMean(r.hidden, doc.mention_spans);
  Var nodes = graph.ConcatRows(
      {graph.ConcatCols({sentence_means, graph.RepeatRow(param(types_.sentence), ns)}),
       graph.ConcatCols({mention_means, graph.RepeatRow(param(types_.mention), nm)})});
  r.dlg_nodes = RgcnForward(graph, reg, dlg_, doc.dlg_adjacency, nodes);

  std::vector<int> mention_rows(nm);
  for (size_t m = 0; m < nm; ++m) mention_rows[m] = static_cast<int>(ns + m);
  Var convolved = graph.GatherRows(r.dlg_nodes, mention_rows);
  r.entity_h = graph.GroupLogSumExp(mention_means, doc.entity_mentions);
  r.entity_pre = graph.GroupLogSumExp(convolved, doc.entity_mentions);

  if (config_.flags.use_aggregation) {
    r.entity_dlg = AttentionFuse(graph, r.entity_pre, param(fusion_.w_pre), r.entity_h,
                                 param(fusion_.w_h), r.entity_h, param(fusion_.w_h),
                                 static_cast<double>(config_.d_w), config_.literal_attention);
  } else {
    r.entity_dlg = graph.MatMul(r.entity_pre, param(fusion_.w_pre));
  }

  if (config_.flags.use_reasoning) {
    Var elg_nodes =
        graph.ConcatCols({r.entity_pre, graph.RepeatRow(param(types_.entity), ne)});
    r.entity_elg = RgcnForward(graph, reg, elg_, doc.elg_adjacency, elg_nodes);
    r.entity_rep = AttentionFuse(graph, r.entity_dlg, param(fusion_.w_dlg), r.entity_elg,
                                 param(fusion_.w_elg), r.entity_h, param(fusion_.w_h),
                                 static_cast<double>(config_.d_e()), config_.literal_attention);
  } else {
    r.entity_rep = r.entity_dlg;
  }

  const size_t np = doc.pairs.size();
  std::vector<int> heads(np), tails(np), fwd(np), bwd(np);
  for (size_t i = 0; i < np; ++i) {
    const auto [m, n] = doc.pairs[i];
    heads[i] = m;
    tails[i] = n;
    const long delta = doc.first_position[n] - doc.first_position[m];
    fwd[i] = DistanceBucket(delta) + kMaxDistanceBucket;
    bwd[i] = DistanceBucket(-delta) + kMaxDistanceBucket;
  }
  Var dist = param(classifier_.distance_embedding);
  r.pair_reps = graph.ConcatCols({graph.GatherRows(r.entity_rep, heads), graph.GatherRows(dist, fwd),
                                  graph.GatherRows(r.entity_rep, tails), graph.GatherRows(dist, bwd)});
  r.context = ContextRepresentations(graph, r.pair_reps, param(classifier_.context),
                                     config_.context_includes_target);
  Var features = graph.ConcatCols({r.pair_reps, r.context});
  Var hidden = graph.Relu(graph.AddRow(graph.MatMul(features, param(classifier_.hidden_weight)),
                                       param(classifier_.hidden_bias)));
  Var logits = graph.AddRow(graph.MatMul(hidden, param(classifier_.output_weight)),
                            param(classifier_.output_bias));
  r.probs = graph.Sigmoid(logits);
  return r;
}

Var Model::Loss(Graph &graph, const PreparedDocument &doc, ForwardResult *out) const {
  ForwardResult r = Forward(graph, doc);
  Var loss = graph.BinaryCrossEntropy(r.probs, doc.labels);
  if (out) *out = r;
  return loss;
}

void SaveModel(const std::string &path, const Model &model, const Vocabulary &vocab,
               const RelationSchema &schema) {
  Checkpoint ckpt;
  json meta = {{"model", json::parse(model.config().ToJson())},
               {"vocab", vocab.tokens()},
               {"relations", schema.names()}};
  ckpt.metadata = meta.dump();
  ckpt.config_hash = model.config().Hash();
  ckpt.params = model.params();
  const std::string tmp = path + ".tmp";
  WriteCheckpoint(tmp, ckpt);
  std::rename(tmp.c_str(), path.c_str());
}

LoadedModel LoadModel(const std::string &path) {
  Checkpoint ckpt = ReadCheckpoint(path);
  json meta;
  try {
    meta = json::parse(ckpt.metadata);
  } catch (const json::exception &e) {
    throw DataError("checkpoint metadata is not valid JSON: " + path);
  }
  LoadedModel out;
  const ModelConfig config = ModelConfig::FromJson(meta.at("model").dump());
  if (config.Hash() != ckpt.config_hash) throw DataError("checkpoint config hash mismatch: " + path);
  auto tokens = meta.at("vocab").get<std::vector<std::string>>();
  if (tokens.size() < 2) throw DataError("checkpoint vocabulary is missing reserved entries");
  out.vocab = Vocabulary::FromTokens({tokens.begin() + 2, tokens.end()});
  out.schema = RelationSchema(meta.at("relations").get<std::vector<std::string>>());
  out.model = std::make_unique<Model>(config, out.vocab.size());
  out.model->params().CopyValuesFrom(ckpt.params);
  return out;
}

}  // namespace docre
