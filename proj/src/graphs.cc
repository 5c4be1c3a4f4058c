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

#include "docre/graphs.h"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "docre/errors.h"
#include "json.hpp"

namespace docre {

using json = nlohmann::json;

std::string EdgeTypeName(EdgeType type) {
  switch (type) {
    case EdgeType::kMentionMention: return "MM";
    case EdgeType::kMentionSentence: return "MS";
    case EdgeType::kSentenceSentence: return "SS";
    case EdgeType::kIntra: return "INTRA";
    case EdgeType::kLogic: return "LOGIC";
  }
  return "?";
}

std::string NodeKindName(NodeKind kind) {
  switch (kind) {
    case NodeKind::kSentence: return "sentence";
    case NodeKind::kMention: return "mention";
    case NodeKind::kEntity: return "entity";
  }
  return "?";
}

TypedEdge TypedEdge::Make(EdgeType type, NodeRef a, NodeRef b) {
  if (a == b) throw ArgumentError("edge endpoints must differ");
  return a < b ? TypedEdge{type, a, b} : TypedEdge{type, b, a};
}

std::vector<MentionRef> FlattenMentions(const Document &doc) {
  std::vector<MentionRef> out;
  for (size_t e = 0; e < doc.entities.size(); ++e) {
    const auto &ms = doc.entities[e].mentions;
    for (size_t k = 0; k < ms.size(); ++k) {
      out.push_back({static_cast<int>(e), static_cast<int>(k), ms[k].sentence_index,
                     ms[k].token_start, ms[k].token_end});
    }
  }
  return out;
}

namespace {

void RequireValid(const Document &doc) {
  const auto violations = ValidateDocument(doc);
  if (!violations.empty()) {
    throw DataError("cannot build graphs for '" + doc.title + "': " + violations[0].detail);
  }
}

void SortUnique(std::vector<TypedEdge> &edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

size_t CountType(const std::vector<TypedEdge> &edges, EdgeType type) {
  return std::count_if(edges.begin(), edges.end(),
                       [type](const TypedEdge &e) { return e.type == type; });
}

// Sorted distinct entities per sentence.
std::vector<std::vector<int>> EntitiesBySentence(const Document &doc) {
  std::vector<std::vector<int>> out(doc.sentences.size());
  for (size_t e = 0; e < doc.entities.size(); ++e) {
    for (const Mention &m : doc.entities[e].mentions) out[m.sentence_index].push_back(e);
  }
  for (auto &v : out) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return out;
}

NodeRef Sentence(int s) { return {NodeKind::kSentence, s}; }
NodeRef EntityNode(int e) { return {NodeKind::kEntity, e}; }

// Global id of entity e's first mention in sentence s, or -1.
int MentionIn(const Document &doc, const std::vector<int> &first_global, int e, int s) {
  const auto &ms = doc.entities[e].mentions;
  for (size_t k = 0; k < ms.size(); ++k) {
    if (ms[k].sentence_index == s) return first_global[e] + static_cast<int>(k);
  }
  return -1;
}

std::vector<int> FirstGlobalIds(const Document &doc) {
  std::vector<int> first(doc.entities.size());
  int next = 0;
  for (size_t e = 0; e < doc.entities.size(); ++e) {
    first[e] = next;
    next += static_cast<int>(doc.entities[e].mentions.size());
  }
  return first;
}

void CheckPair(const Document &doc, int ei, int ej) {
  const int n = static_cast<int>(doc.entities.size());
  if (ei < 0 || ej < 0 || ei >= n || ej >= n) throw ArgumentError("entity id out of range");
  if (ei == ej) throw ArgumentError("reasoning paths need two distinct entities");
}

}  // namespace

size_t DocumentGraph::Count(EdgeType type) const { return CountType(edges, type); }
size_t EntityGraph::Count(EdgeType type) const { return CountType(edges, type); }

bool EntityGraph::HasEdge(EdgeType type, int a, int b) const {
  if (a == b) return false;
  const TypedEdge e = TypedEdge::Make(type, EntityNode(a), EntityNode(b));
  return std::binary_search(edges.begin(), edges.end(), e);
}

DocumentGraph BuildDocumentGraph(const Document &doc) {
  RequireValid(doc);
  DocumentGraph g;
  g.num_sentences = static_cast<int>(doc.sentences.size());
  g.mentions = FlattenMentions(doc);
  std::vector<std::vector<int>> by_sentence(doc.sentences.size());
  for (size_t m = 0; m < g.mentions.size(); ++m) {
    by_sentence[g.mentions[m].sentence].push_back(static_cast<int>(m));
    g.edges.push_back(TypedEdge::Make(EdgeType::kMentionSentence,
                                      {NodeKind::kMention, static_cast<int>(m)},
                                      Sentence(g.mentions[m].sentence)));
  }
  for (const auto &ms : by_sentence) {
    for (size_t a = 0; a < ms.size(); ++a) {
      for (size_t b = a + 1; b < ms.size(); ++b) {
        if (g.mentions[ms[a]].entity == g.mentions[ms[b]].entity) continue;
        g.edges.push_back(TypedEdge::Make(EdgeType::kMentionMention,
                                          {NodeKind::kMention, ms[a]},
                                          {NodeKind::kMention, ms[b]}));
      }
    }
  }
  for (int a = 0; a < g.num_sentences; ++a) {
    for (int b = a + 1; b < g.num_sentences; ++b) {
      g.edges.push_back(TypedEdge::Make(EdgeType::kSentenceSentence, Sentence(a), Sentence(b)));
    }
  }
  SortUnique(g.edges);
  return g;
}

EntityGraph BuildEntityGraph(const Document &doc, const ElgOptions &options) {
  RequireValid(doc);
  EntityGraph g;
  g.num_entities = static_cast<int>(doc.entities.size());
  const auto by_sentence = EntitiesBySentence(doc);
  if (options.intra_edges) {
    for (const auto &es : by_sentence) {
      for (size_t a = 0; a < es.size(); ++a) {
        for (size_t b = a + 1; b < es.size(); ++b) {
          g.edges.push_back(TypedEdge::Make(EdgeType::kIntra, EntityNode(es[a]),
                                            EntityNode(es[b])));
        }
      }
    }
  }
  if (options.logic_edges) {
    std::vector<std::vector<int>> sentences_of(doc.entities.size());
    for (size_t s = 0; s < by_sentence.size(); ++s) {
      for (int e : by_sentence[s]) sentences_of[e].push_back(static_cast<int>(s));
    }
    for (int k = 0; k < g.num_entities; ++k) {
      for (int s1 : sentences_of[k]) {
        for (int s2 : sentences_of[k]) {
          if (s1 == s2) continue;
          for (int i : by_sentence[s1]) {
            if (i == k) continue;
            for (int j : by_sentence[s2]) {
              if (j == k || j == i) continue;
              g.edges.push_back(TypedEdge::Make(EdgeType::kLogic, EntityNode(i), EntityNode(j)));
            }
          }
        }
      }
    }
  }
  SortUnique(g.edges);
  return g;
}

std::vector<std::pair<int, ReasoningPath>> FindBridges(const Document &doc, int ei, int ej) {
  CheckPair(doc, ei, ej);
  const auto by_sentence = EntitiesBySentence(doc);
  const auto first = FirstGlobalIds(doc);
  auto has = [&](int s, int e) {
    return std::binary_search(by_sentence[s].begin(), by_sentence[s].end(), e);
  };
  std::vector<std::pair<int, ReasoningPath>> out;
  const int ns = static_cast<int>(doc.sentences.size());
  for (int k = 0; k < static_cast<int>(doc.entities.size()); ++k) {
    if (k == ei || k == ej) continue;
    bool found = false;
    for (int s1 = 0; s1 < ns && !found; ++s1) {
      if (!has(s1, ei) || !has(s1, k)) continue;
      for (int s2 = 0; s2 < ns && !found; ++s2) {
        if (s2 == s1 || !has(s2, k) || !has(s2, ej)) continue;
        ReasoningPath p;
        p.kind = ReasoningPath::Kind::kLogical;
        p.bridge = k;
        p.hops = {{NodeKind::kMention, MentionIn(doc, first, ei, s1)},
                  Sentence(s1),
                  {NodeKind::kMention, MentionIn(doc, first, k, s1)},
                  {NodeKind::kMention, MentionIn(doc, first, k, s2)},
                  Sentence(s2),
                  {NodeKind::kMention, MentionIn(doc, first, ej, s2)}};
        out.emplace_back(k, std::move(p));
        found = true;
      }
    }
  }
  return out;
}

PairExplanation ExplainPair(const Document &doc, int ei, int ej) {
  CheckPair(doc, ei, ej);
  PairExplanation ex;
  const auto first = FirstGlobalIds(doc);
  for (int s = 0; s < static_cast<int>(doc.sentences.size()); ++s) {
    const int mi = MentionIn(doc, first, ei, s);
    const int mj = MentionIn(doc, first, ej, s);
    if (mi < 0 || mj < 0) continue;
    ReasoningPath p;
    p.kind = ReasoningPath::Kind::kIntra;
    p.hops = {{NodeKind::kMention, mi}, Sentence(s), {NodeKind::kMention, mj}};
    ex.intra.push_back(std::move(p));
  }
  for (auto &[bridge, path] : FindBridges(doc, ei, ej)) ex.logical.push_back(std::move(path));
  return ex;
}

std::string PairExplanation::Render(const Document &doc) const {
  const auto mentions = FlattenMentions(doc);
  auto hop = [&](NodeRef n) {
    if (n.kind == NodeKind::kSentence) return "S" + std::to_string(n.index);
    const MentionRef &m = mentions.at(n.index);
    return doc.entities[m.entity].mentions[m.ordinal].surface + "@S" +
           std::to_string(m.sentence);
  };
  auto path = [&](const ReasoningPath &p) {
    std::string s;
    for (size_t i = 0; i < p.hops.size(); ++i) {
      if (i) s += " -> ";
      s += hop(p.hops[i]);
    }
    return s;
  };
  std::ostringstream out;
  out << "intra-sentence paths: " << intra.size() << "\n";
  for (const auto &p : intra) out << "  PI  " << path(p) << "\n";
  out << "logical reasoning paths: " << logical.size() << "\n";
  for (const auto &p : logical) {
    out << "  PL  via " << doc.EntityName(p.bridge) << " (E" << p.bridge << ")\n"
        << "      " << path(p) << "\n";
  }
  return out.str();
}

std::shared_ptr<const SparseRows> NeighborMean(size_t num_nodes,
                                               const std::vector<TypedEdge> &edges,
                                               EdgeType type,
                                               const std::function<int(NodeRef)> &row_of) {
  std::vector<std::vector<int>> nbrs(num_nodes);
  for (const TypedEdge &e : edges) {
    if (e.type != type) continue;
    const int a = row_of(e.u), b = row_of(e.v);
    nbrs[a].push_back(b);
    nbrs[b].push_back(a);
  }
  std::vector<SparseEntry> entries;
  for (size_t i = 0; i < num_nodes; ++i) {
    const double w = nbrs[i].empty() ? 0.0 : 1.0 / static_cast<double>(nbrs[i].size());
    for (int j : nbrs[i]) entries.push_back({static_cast<int>(i), j, w});
  }
  return std::make_shared<SparseRows>(
      SparseRows::FromEntries(num_nodes, num_nodes, std::move(entries)));
}

std::string GraphsToJson(const Document &doc, const DocumentGraph &dlg, const EntityGraph &elg) {
  auto node = [](NodeRef n) { return json::array({NodeKindName(n.kind), n.index}); };
  auto edges = [&](const std::vector<TypedEdge> &es) {
    json out = json::array();
    for (const TypedEdge &e : es) out.push_back({EdgeTypeName(e.type), node(e.u), node(e.v)});
    return out;
  };
  json dnodes = json::array();
  for (int s = 0; s < dlg.num_sentences; ++s) dnodes.push_back(node(Sentence(s)));
  for (size_t m = 0; m < dlg.mentions.size(); ++m) {
    json n = node({NodeKind::kMention, static_cast<int>(m)});
    n.push_back({{"entity", dlg.mentions[m].entity},
                 {"sentence", dlg.mentions[m].sentence},
                 {"span", {dlg.mentions[m].start, dlg.mentions[m].end}}});
    dnodes.push_back(n);
  }
  json enodes = json::array();
  for (int e = 0; e < elg.num_entities; ++e) {
    json n = node(EntityNode(e));
    n.push_back({{"name", doc.EntityName(e)}});
    enodes.push_back(n);
  }
  json j = {{"title", doc.title},
            {"dlg", {{"nodes", dnodes}, {"edges", edges(dlg.edges)}}},
            {"elg", {{"nodes", enodes}, {"edges", edges(elg.edges)}}}};
  return j.dump();
}

}  // namespace docre
