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

#ifndef DOCRE_GRAPHS_H_
#define DOCRE_GRAPHS_H_

#include <compare>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "docre/corpus.h"
#include "docre/kernels.h"

namespace docre {

enum class NodeKind { kSentence, kMention, kEntity };

// A node of a document graph. Mention indices are global: mentions are
// numbered entity by entity, in each entity's mention order.
struct NodeRef {
  NodeKind kind = NodeKind::kSentence;
  int index = 0;

  auto operator<=>(const NodeRef &) const = default;
};

enum class EdgeType {
  kMentionMention,
  kMentionSentence,
  kSentenceSentence,
  kIntra,
  kLogic,
};

std::string EdgeTypeName(EdgeType type);
std::string NodeKindName(NodeKind kind);

// Undirected typed edge with endpoints stored in ascending order.
struct TypedEdge {
  EdgeType type;
  NodeRef u;
  NodeRef v;

  static TypedEdge Make(EdgeType type, NodeRef a, NodeRef b);
  auto operator<=>(const TypedEdge &) const = default;
};

struct MentionRef {
  int entity = 0;
  int ordinal = 0;  // position in the entity's mention list
  int sentence = 0;
  int start = 0;
  int end = 0;
};

// Flattened mention list in global mention-id order.
std::vector<MentionRef> FlattenMentions(const Document &doc);

// Sentence and mention nodes; no entity nodes. Node rows for feature
// matrices are sentences first, then mentions by global id.
struct DocumentGraph {
  int num_sentences = 0;
  std::vector<MentionRef> mentions;
  std::vector<TypedEdge> edges;  // sorted, unique

  size_t num_nodes() const { return num_sentences + mentions.size(); }
  int Row(NodeRef n) const {
    return n.kind == NodeKind::kSentence ? n.index : num_sentences + n.index;
  }
  size_t Count(EdgeType type) const;
};

struct EntityGraph {
  int num_entities = 0;
  std::vector<TypedEdge> edges;  // sorted, unique; INTRA and LOGIC may share a pair

  size_t Count(EdgeType type) const;
  bool HasEdge(EdgeType type, int a, int b) const;
};

struct ElgOptions {
  bool intra_edges = true;
  bool logic_edges = true;
};

// Mention-mention edges join mentions of different entities in one
// sentence; mention-sentence edges join a mention to its sentence; all
// sentence pairs are joined. Throws DataError for invalid documents.
DocumentGraph BuildDocumentGraph(const Document &doc);

// INTRA joins entities co-occurring in a sentence. LOGIC joins e_i, e_j when
// some bridge e_k (k not in {i, j}) co-occurs with e_i in sentence s1 and
// with e_j in sentence s2, s1 != s2.
EntityGraph BuildEntityGraph(const Document &doc, const ElgOptions &options = {});

struct ReasoningPath {
  enum class Kind { kIntra, kLogical };
  Kind kind = Kind::kIntra;
  std::vector<NodeRef> hops;
  int bridge = -1;  // logical paths only
};

// Every bridge entity for (ei, ej), ascending by id, each with one witness
// path m_i@s1 -> s1 -> m_k@s1 -> m_k@s2 -> s2 -> m_j@s2; the smallest
// (s1, s2) wins and each hop uses the entity's first mention in that sentence.
// Throws ArgumentError if ei == ej.
std::vector<std::pair<int, ReasoningPath>> FindBridges(const Document &doc, int ei, int ej);

struct PairExplanation {
  std::vector<ReasoningPath> intra;    // one per shared sentence
  std::vector<ReasoningPath> logical;  // one per bridge

  std::string Render(const Document &doc) const;
};

PairExplanation ExplainPair(const Document &doc, int ei, int ej);

// Row-normalized adjacency for one edge type: entry (i, j) = 1 / |N_i^type|
// for each neighbor j, both directions of every undirected edge.
std::shared_ptr<const SparseRows> NeighborMean(size_t num_nodes,
                                               const std::vector<TypedEdge> &edges,
                                               EdgeType type,
                                               const std::function<int(NodeRef)> &row_of);

// {"title", "dlg": {"nodes", "edges"}, "elg": {"nodes", "edges"}}; each edge
// is [type, [kind, index], [kind, index]].
std::string GraphsToJson(const Document &doc, const DocumentGraph &dlg, const EntityGraph &elg);

}  // namespace docre

#endif  // DOCRE_GRAPHS_H_
