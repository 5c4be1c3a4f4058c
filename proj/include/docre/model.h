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

#ifndef DOCRE_MODEL_H_
#define DOCRE_MODEL_H_

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "docre/autograd.h"
#include "docre/corpus.h"
#include "docre/encoder.h"
#include "docre/graphs.h"
#include "docre/params.h"

namespace docre {

struct AblationFlags {
  bool use_aggregation = true;  // attention fusion of the document graph
  bool use_reasoning = true;    // entity graph and final fusion
  bool use_intra_edges = true;
  bool use_logic_edges = true;

  bool operator==(const AblationFlags &) const = default;
};

struct ModelConfig {
  int d_w = 32;     // encoder output
  int d_t = 8;      // node-type embedding
  int d_dist = 8;   // distance-bucket embedding
  int layers = 2;   // R-GCN layers per graph
  int n_relations = 1;
  int max_len = 1024;
  AblationFlags flags;
  // Softmax of each entity's single query-key score, which makes both entity
  // fusions a plain value projection. Off by default: attention is
  // normalized over all entities of the document.
  bool literal_attention = false;
  // Whether a pair attends to itself when pooling context pair representations.
  bool context_includes_target = true;
  uint64_t seed = 1;

  int d_n() const { return d_w + d_t; }
  int d_e() const { return d_n() + d_t; }
  int d_r() const { return 2 * (d_n() + d_dist); }

  // Throws ArgumentError if a dimension or the layer count is < 1.
  void Validate() const;
  std::string ToJson() const;
  static ModelConfig FromJson(const std::string &text);
  uint64_t Hash() const { return Fnv1a64(ToJson()); }

  bool operator==(const ModelConfig &) const = default;
};

inline constexpr int kMaxDistanceBucket = 8;

// Signed log-scale bucket of a token offset:
// |d| 0,1,2 -> 0,1,2; 3-4 -> 3; 5-8 -> 4; 9-16 -> 5; 17-32 -> 6; 33-64 -> 7;
// >= 65 -> 8; the sign of d is kept.
int DistanceBucket(long delta);

struct RgcnLayerParams {
  size_t self = 0;
  std::vector<size_t> per_type;  // aligned with RgcnParams::types
};

struct RgcnParams {
  std::vector<EdgeType> types;
  std::vector<RgcnLayerParams> layers;

  static RgcnParams Register(ParamRegistry &registry, const std::string &prefix,
                             std::vector<EdgeType> types, int dim, int layers, uint64_t seed);
};

// L layers of n_i <- ReLU(W_0 n_i + sum_x sum_{j in N_i^x} W_x n_j / |N_i^x|),
// in row form. `adjacency[x]` is the row-normalized neighbor matrix of
// params.types[x].
Var RgcnForward(Graph &graph, const ParamRegistry &registry, const RgcnParams &params,
                const std::vector<std::shared_ptr<const SparseRows>> &adjacency, Var nodes);

// softmax(Q K^T / sqrt(key_dim)) V with Q = queries * w_query,
// K = keys * w_key, V = values * w_value; the softmax runs over the rows of K.
// With `literal` set, each query attends only to its own row, so the
// result is V.
Var AttentionFuse(Graph &graph, Var queries, Var w_query, Var keys, Var w_key, Var values,
                  Var w_value, double key_dim, bool literal);

// Context pooling over pair representations: row r is sum_i theta_ri o_i with
// theta_r = softmax_i(o_i W o_r^T). When `include_target` is false the pair's
// own term is masked (a lone pair then gets a zero context).
Var ContextRepresentations(Graph &graph, Var pair_reps, Var w, bool include_target);

// Per-document inputs derived once and reused across epochs.
struct PreparedDocument {
  std::string title;
  std::vector<int> token_ids;
  std::vector<std::pair<size_t, size_t>> sentence_spans;  // document positions
  std::vector<std::pair<size_t, size_t>> mention_spans;   // global mention order
  std::vector<std::vector<int>> entity_mentions;          // mention ids per entity
  std::vector<std::shared_ptr<const SparseRows>> dlg_adjacency;  // MM, MS, SS
  std::vector<std::shared_ptr<const SparseRows>> elg_adjacency;  // INTRA, LOGIC
  std::vector<long> first_position;                              // per entity
  std::vector<std::pair<int, int>> pairs;                        // ordered (head, tail)
  Tensor labels;                                                 // pairs x |R|

  size_t num_entities() const { return entity_mentions.size(); }
  size_t num_sentences() const { return sentence_spans.size(); }
};

// Every ordered pair (m, n), m != n, head-major.
std::vector<std::pair<int, int>> AllOrderedPairs(size_t num_entities);

struct ForwardResult {
  Var hidden;       // H, k x d_w
  Var dlg_nodes;    // after R-GCN
  Var entity_h;     // Ne x d_w, logsumexp of mention means
  Var entity_pre;   // Ne x d_n, logsumexp of convolved mention nodes
  Var entity_dlg;   // Ne x d_n
  Var entity_elg;   // Ne x d_e, invalid when reasoning is disabled
  Var entity_rep;   // Ne x d_n
  Var pair_reps;    // P x d_r
  Var context;      // P x d_r
  Var probs;        // P x |R|
};

class Model {
 public:
  // Registers every parameter with seeded initialization.
  Model(const ModelConfig &config, size_t vocab_size);

  const ModelConfig &config() const { return config_; }
  ParamRegistry &params() { return registry_; }
  const ParamRegistry &params() const { return registry_; }
  size_t vocab_size() const { return vocab_size_; }

  // Throws DataError for invalid or over-long documents. `pairs` defaults to
  // every ordered pair.
  PreparedDocument Prepare(const Document &doc, const Vocabulary &vocab,
                           const std::vector<std::pair<int, int>> *pairs = nullptr) const;

  // Full forward pass. Requires at least two entities and one pair.
  ForwardResult Forward(Graph &graph, const PreparedDocument &doc) const;
  // Summed binary cross-entropy over all pairs and relations of the document.
  Var Loss(Graph &graph, const PreparedDocument &doc, ForwardResult *out = nullptr) const;

  // Parameter groups, exposed for tests.
  const EncoderParams &encoder() const { return encoder_; }
  const RgcnParams &dlg_rgcn() const { return dlg_; }
  const RgcnParams &elg_rgcn() const { return elg_; }
  struct Fusion {
    size_t w_pre, w_h, w_dlg, w_elg;
  };
  struct Types {
    size_t sentence, mention, entity;
  };
  struct Classifier {
    size_t distance_embedding, context, hidden_weight, hidden_bias, output_weight, output_bias;
  };
  const Fusion &fusion() const { return fusion_; }
  const Types &types() const { return types_; }
  const Classifier &classifier() const { return classifier_; }

 private:
  ModelConfig config_;
  size_t vocab_size_;
  ParamRegistry registry_;
  EncoderParams encoder_;
  Types types_{};
  RgcnParams dlg_;
  RgcnParams elg_;
  Fusion fusion_{};
  Classifier classifier_{};
};

// Checkpoint with config, vocabulary and schema in the metadata block.
void SaveModel(const std::string &path, const Model &model, const Vocabulary &vocab,
               const RelationSchema &schema);

struct LoadedModel {
  std::unique_ptr<Model> model;
  Vocabulary vocab;
  RelationSchema schema;
};

LoadedModel LoadModel(const std::string &path);

}  // namespace docre

#endif  // DOCRE_MODEL_H_
