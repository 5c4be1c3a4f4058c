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

#include "docre/synthetic.h"

#include <algorithm>
#include <array>
#include <random>
#include <set>
#include <tuple>
#include <vector>

#include "docre/errors.h"

namespace docre {

namespace {

constexpr std::array<const char *, 24> kFiller = {
    "the",   "a",     "of",   "in",    "was",   "is",   "and",  "its",
    "with",  "by",    "on",   "later", "early", "known", "also", "has",
    "for",   "at",    "from", "new",   "old",   "local", "first", "major"};

constexpr std::array<const char *, 20> kSyllables = {
    "ka", "lo", "mer", "tan", "vi", "dor", "sel", "ra", "qu", "ben",
    "zo", "lin", "har", "pe", "mos", "ti", "gra", "nu", "wel", "cor"};

constexpr std::array<const char *, 6> kSuffixes = {"Corp", "City", "River",
                                                   "Group", "Institute", "Prize"};

// One sentence before materialization: words and entity slots.
struct Piece {
  int entity = -1;  // planning id, or -1 for a word
  std::string word;
};
using Plan = std::vector<Piece>;

struct FactPlan {
  int head, tail, relation;
  std::vector<int> sentences;  // plan sentence indices
};

class DocBuilder {
 public:
  DocBuilder(std::mt19937_64 &rng, const RelationSchema &schema, const GeneratorKnobs &knobs)
      : rng_(rng), schema_(schema), knobs_(knobs) {}

  Document Build(const std::string &title);

 private:
  int Uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool Coin(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }
  std::string FillerWord() { return kFiller[Uniform(0, kFiller.size() - 1)]; }
  void MaybeFiller(Plan &s, double p = 0.5) {
    if (Coin(p)) s.push_back({-1, FillerWord()});
  }
  std::vector<std::string> MakeName(std::set<std::string> &taken);

  std::mt19937_64 &rng_;
  const RelationSchema &schema_;
  const GeneratorKnobs &knobs_;
};

std::vector<std::string> DocBuilder::MakeName(std::set<std::string> &taken) {
  for (;;) {
    std::string name;
    const int parts = Uniform(2, 3);
    for (int i = 0; i < parts; ++i) name += kSyllables[Uniform(0, kSyllables.size() - 1)];
    name[0] = static_cast<char>(name[0] - 'a' + 'A');
    if (!taken.insert(name).second) continue;
    std::vector<std::string> tokens = {name};
    if (Coin(knobs_.two_token_mentions)) {
      tokens.push_back(kSuffixes[Uniform(0, kSuffixes.size() - 1)]);
    }
    return tokens;
  }
}

Document DocBuilder::Build(const std::string &title) {
  int entity_budget = Uniform(knobs_.min_entities, knobs_.max_entities);
  int sentence_budget = Uniform(knobs_.min_sentences, knobs_.max_sentences);
  const double frac = knobs_.inter_fraction;
  const bool mixed = frac > 0.0 && frac < 1.0;

  std::vector<Plan> sentences;
  std::vector<FactPlan> facts;
  int next_entity = 0;
  for (;;) {
    bool inter = Coin(frac);
    auto fits = [&](bool as_inter) {
      return next_entity + (as_inter ? 3 : 2) <= entity_budget &&
             static_cast<int>(sentences.size()) + (as_inter ? 2 : 1) <= sentence_budget;
    };
    if (!fits(inter)) {
      if (facts.empty()) {
        entity_budget = std::max(entity_budget, next_entity + (inter ? 3 : 2));
        sentence_budget = std::max(sentence_budget, static_cast<int>(sentences.size()) +
                                                        (inter ? 2 : 1));
      } else if (mixed && fits(!inter)) {
        inter = !inter;
      } else {
        break;
      }
    }
    const int relation = Uniform(0, static_cast<int>(schema_.count()) - 1);
    const std::string &rel = schema_.name(relation);
    FactPlan f{next_entity, next_entity + 1, relation, {}};
    if (!inter) {
      next_entity += 2;
      Plan s;
      MaybeFiller(s, 0.3);
      s.push_back({f.head, ""});
      MaybeFiller(s, 0.3);
      s.push_back({-1, IntraTrigger(rel)});
      MaybeFiller(s);
      s.push_back({f.tail, ""});
      MaybeFiller(s, 0.3);
      s.push_back({-1, "."});
      f.sentences = {static_cast<int>(sentences.size())};
      sentences.push_back(std::move(s));
    } else {
      const int bridge = next_entity + 2;
      next_entity += 3;
      Plan s1, s2;
      MaybeFiller(s1, 0.3);
      s1.push_back({f.head, ""});
      s1.push_back({-1, BridgeHeadTrigger(rel)});
      MaybeFiller(s1);
      s1.push_back({bridge, ""});
      s1.push_back({-1, "."});
      MaybeFiller(s2, 0.3);
      s2.push_back({bridge, ""});
      s2.push_back({-1, BridgeTailTrigger(rel)});
      MaybeFiller(s2);
      s2.push_back({f.tail, ""});
      s2.push_back({-1, "."});
      f.sentences = {static_cast<int>(sentences.size()), static_cast<int>(sentences.size()) + 1};
      sentences.push_back(std::move(s1));
      sentences.push_back(std::move(s2));
    }
    facts.push_back(std::move(f));
  }
  const int fact_entities = next_entity;

  // Distractors go two per filler sentence, extra sentences are added if the
  // budget runs out.
  const int distractors = std::max(0, entity_budget - fact_entities);
  int fillers = std::max(0, sentence_budget - static_cast<int>(sentences.size()));
  fillers = std::max(fillers, (distractors + 1) / 2);
  std::vector<std::vector<int>> filler_entities(fillers);
  for (int d = 0; d < distractors; ++d) {
    filler_entities[d % std::max(1, fillers)].push_back(fact_entities + d);
  }
  for (int i = 0; i < fillers; ++i) {
    Plan s;
    auto &ents = filler_entities[i];
    if (ents.empty() && Coin(0.5)) ents.push_back(Uniform(0, fact_entities - 1));
    if (ents.empty()) {
      const int n = Uniform(3, 6);
      for (int k = 0; k < n; ++k) s.push_back({-1, FillerWord()});
    } else {
      MaybeFiller(s);
      for (size_t k = 0; k < ents.size(); ++k) {
        s.push_back({ents[k], ""});
        s.push_back({-1, FillerWord()});
        MaybeFiller(s, 0.3);
      }
    }
    s.push_back({-1, "."});
    sentences.push_back(std::move(s));
  }

  const int num_entities = fact_entities + distractors;
  std::set<std::string> taken;
  std::vector<std::vector<std::string>> names(num_entities);
  for (auto &n : names) n = MakeName(taken);

  std::vector<int> sentence_order(sentences.size());
  for (size_t i = 0; i < sentence_order.size(); ++i) sentence_order[i] = static_cast<int>(i);
  std::shuffle(sentence_order.begin(), sentence_order.end(), rng_);
  std::vector<int> sentence_rank(sentences.size());
  for (size_t i = 0; i < sentence_order.size(); ++i) sentence_rank[sentence_order[i]] = i;

  std::vector<int> entity_id(num_entities);
  for (int i = 0; i < num_entities; ++i) entity_id[i] = i;
  std::shuffle(entity_id.begin(), entity_id.end(), rng_);

  Document doc;
  doc.title = title;
  doc.entities.resize(num_entities);
  for (int i = 0; i < num_entities; ++i) doc.entities[i].entity_id = i;
  for (size_t out = 0; out < sentence_order.size(); ++out) {
    std::vector<std::string> tokens;
    for (const Piece &p : sentences[sentence_order[out]]) {
      if (p.entity < 0) {
        tokens.push_back(p.word);
        continue;
      }
      const auto &name = names[p.entity];
      Mention m;
      m.sentence_index = static_cast<int>(out);
      m.token_start = static_cast<int>(tokens.size());
      m.token_end = m.token_start + static_cast<int>(name.size());
      for (size_t k = 0; k < name.size(); ++k) {
        if (k) m.surface += " ";
        m.surface += name[k];
        tokens.push_back(name[k]);
      }
      doc.entities[entity_id[p.entity]].mentions.push_back(std::move(m));
    }
    doc.sentences.push_back(std::move(tokens));
  }
  for (const FactPlan &f : facts) {
    RelationFact rf{entity_id[f.head], entity_id[f.tail], f.relation, {}};
    for (int s : f.sentences) rf.evidence.push_back(sentence_rank[s]);
    std::sort(rf.evidence.begin(), rf.evidence.end());
    doc.facts.push_back(std::move(rf));
  }
  std::sort(doc.facts.begin(), doc.facts.end(), [](const RelationFact &a, const RelationFact &b) {
    return std::tie(a.head, a.tail, a.relation) < std::tie(b.head, b.tail, b.relation);
  });
  return doc;
}

}  // namespace

std::string IntraTrigger(const std::string &name) { return name; }
std::string BridgeHeadTrigger(const std::string &name) { return name + "-from"; }
std::string BridgeTailTrigger(const std::string &name) { return name + "-to"; }

Corpus GenerateSynthetic(uint64_t seed, size_t n_docs, const RelationSchema &schema,
                         const GeneratorKnobs &knobs) {
  if (n_docs == 0) throw ArgumentError("synthetic corpus needs at least one document");
  if (schema.count() == 0) throw ArgumentError("synthetic corpus needs a nonempty schema");
  if (knobs.min_sentences < 1 || knobs.max_sentences < knobs.min_sentences ||
      knobs.min_entities < 2 || knobs.max_entities < knobs.min_entities) {
    throw ArgumentError("synthetic generator: inconsistent sentence/entity ranges");
  }
  if (!(knobs.inter_fraction >= 0.0 && knobs.inter_fraction <= 1.0)) {
    throw ArgumentError("synthetic generator: inter_fraction must lie in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  Corpus corpus;
  corpus.schema = schema;
  corpus.split = knobs.split;
  DocBuilder builder(rng, schema, knobs);
  for (size_t i = 0; i < n_docs; ++i) {
    corpus.documents.push_back(
        builder.Build("synthetic-" + std::to_string(seed) + "-" + std::to_string(i)));
  }
  return corpus;
}

Document TinyDocument() {
  Document d;
  d.title = "tiny";
  d.sentences = {{"Alice", "works", "at", "Acme", "."}, {"Acme", "is", "based", "in", "Paris", "."}};
  d.entities = {{0, {{0, 0, 1, "Alice"}}},
                {1, {{0, 3, 4, "Acme"}, {1, 0, 1, "Acme"}}},
                {2, {{1, 4, 5, "Paris"}}}};
  d.facts = {{0, 1, 0, {0}}, {1, 2, 1, {1}}, {0, 2, 2, {0, 1}}};
  return d;
}

RelationSchema TinySchema() { return RelationSchema({"works_at", "based_in", "located_in"}); }

Corpus TinyCorpus() {
  Corpus c;
  c.documents = {TinyDocument()};
  c.schema = TinySchema();
  return c;
}

}  // namespace docre
