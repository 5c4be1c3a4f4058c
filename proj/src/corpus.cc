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

#include "docre/corpus.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

#include "docre/errors.h"
#include "json.hpp"

namespace docre {

using json = nlohmann::json;

size_t Document::NumTokens() const {
  size_t n = 0;
  for (const auto &s : sentences) n += s.size();
  return n;
}

std::vector<size_t> Document::SentenceOffsets() const {
  std::vector<size_t> offsets(sentences.size());
  size_t pos = 0;
  for (size_t i = 0; i < sentences.size(); ++i) {
    offsets[i] = pos;
    pos += sentences[i].size();
  }
  return offsets;
}

size_t Document::FirstMentionPosition(int entity) const {
  const auto offsets = SentenceOffsets();
  size_t best = std::numeric_limits<size_t>::max();
  for (const Mention &m : entities.at(entity).mentions) {
    best = std::min(best, offsets.at(m.sentence_index) + m.token_start);
  }
  return best;
}

const std::string &Document::EntityName(int entity) const {
  const Entity &e = entities.at(entity);
  const Mention *first = &e.mentions.at(0);
  for (const Mention &m : e.mentions) {
    if (std::tie(m.sentence_index, m.token_start) <
        std::tie(first->sentence_index, first->token_start)) {
      first = &m;
    }
  }
  return first->surface;
}

bool Document::ShareSentence(int a, int b) const {
  for (const Mention &ma : entities.at(a).mentions) {
    for (const Mention &mb : entities.at(b).mentions) {
      if (ma.sentence_index == mb.sentence_index) return true;
    }
  }
  return false;
}

RelationSchema::RelationSchema(std::vector<std::string> names) : names_(std::move(names)) {
  for (size_t i = 0; i < names_.size(); ++i) {
    if (!ids_.emplace(names_[i], static_cast<int>(i)).second) {
      throw SchemaError("duplicate relation name in schema: " + names_[i]);
    }
  }
}

RelationSchema RelationSchema::Numbered(size_t n) {
  std::vector<std::string> names;
  for (size_t i = 0; i < n; ++i) names.push_back("rel" + std::to_string(i));
  return RelationSchema(std::move(names));
}

int RelationSchema::Id(const std::string &name) const {
  auto it = ids_.find(name);
  if (it == ids_.end()) throw SchemaError("unknown relation name: " + name);
  return it->second;
}

std::string SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "train";
}

Split ParseSplit(const std::string &name) {
  if (name == "train") return Split::kTrain;
  if (name == "dev") return Split::kDev;
  if (name == "test") return Split::kTest;
  throw ArgumentError("unknown split: " + name);
}

std::string ViolationKindName(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::kNoSentences: return "no_sentences";
    case Violation::Kind::kEmptySentence: return "empty_sentence";
    case Violation::Kind::kEmptyEntity: return "empty_entity";
    case Violation::Kind::kBadSentenceIndex: return "bad_sentence_index";
    case Violation::Kind::kSpanOutOfRange: return "span_out_of_range";
    case Violation::Kind::kBadEntityIndex: return "bad_entity_index";
    case Violation::Kind::kSelfRelation: return "self_relation";
    case Violation::Kind::kDuplicateFact: return "duplicate_fact";
    case Violation::Kind::kBadRelation: return "bad_relation";
  }
  return "unknown";
}

std::vector<Violation> ValidateDocument(const Document &doc, const RelationSchema *schema) {
  using K = Violation::Kind;
  std::vector<Violation> out;
  if (doc.sentences.empty()) out.push_back({K::kNoSentences, "document has no sentences"});
  for (size_t s = 0; s < doc.sentences.size(); ++s) {
    if (doc.sentences[s].empty()) {
      out.push_back({K::kEmptySentence, "sentence " + std::to_string(s) + " has no tokens"});
    }
  }
  const int num_sentences = static_cast<int>(doc.sentences.size());
  for (size_t e = 0; e < doc.entities.size(); ++e) {
    const Entity &ent = doc.entities[e];
    if (ent.mentions.empty()) {
      out.push_back({K::kEmptyEntity, "entity " + std::to_string(e) + " has no mentions"});
    }
    for (size_t m = 0; m < ent.mentions.size(); ++m) {
      const Mention &mn = ent.mentions[m];
      const std::string where = "entity " + std::to_string(e) + " mention " + std::to_string(m);
      if (mn.sentence_index < 0 || mn.sentence_index >= num_sentences) {
        out.push_back({K::kBadSentenceIndex, where + ": sentence " +
                                                 std::to_string(mn.sentence_index)});
        continue;
      }
      const int len = static_cast<int>(doc.sentences[mn.sentence_index].size());
      if (mn.token_start < 0 || mn.token_start >= mn.token_end || mn.token_end > len) {
        out.push_back({K::kSpanOutOfRange, where + ": span [" + std::to_string(mn.token_start) +
                                               "," + std::to_string(mn.token_end) +
                                               ") in sentence of length " + std::to_string(len)});
      }
    }
  }
  const int num_entities = static_cast<int>(doc.entities.size());
  std::set<std::tuple<int, int, int>> seen;
  for (size_t f = 0; f < doc.facts.size(); ++f) {
    const RelationFact &fact = doc.facts[f];
    const std::string where = "fact " + std::to_string(f);
    if (fact.head < 0 || fact.head >= num_entities || fact.tail < 0 ||
        fact.tail >= num_entities) {
      out.push_back({K::kBadEntityIndex, where + ": entity index out of range"});
    }
    if (fact.head == fact.tail) {
      out.push_back({K::kSelfRelation, where + ": head equals tail"});
    }
    if (fact.relation < 0 ||
        (schema != nullptr && static_cast<size_t>(fact.relation) >= schema->count())) {
      out.push_back({K::kBadRelation, where + ": relation " + std::to_string(fact.relation)});
    }
    if (!seen.emplace(fact.head, fact.tail, fact.relation).second) {
      out.push_back({K::kDuplicateFact, where + ": duplicate (head, tail, relation)"});
    }
  }
  return out;
}

StatsReport CorpusStats(const Corpus &corpus) {
  StatsReport r;
  r.documents = corpus.documents.size();
  r.relation_types = corpus.schema.count();
  for (const Document &d : corpus.documents) {
    r.entities += d.entities.size();
    r.facts += d.facts.size();
    for (const Entity &e : d.entities) r.mentions += e.mentions.size();
  }
  if (r.documents > 0) {
    const double mean = static_cast<double>(r.entities) / static_cast<double>(r.documents);
    r.mean_entities_per_doc = std::round(mean * 100.0) / 100.0;
  }
  return r;
}

std::string StatsReport::ToText() const {
  char mean[32];
  std::snprintf(mean, sizeof(mean), "%.2f", mean_entities_per_doc);
  std::ostringstream out;
  out << "documents            " << documents << "\n"
      << "entities             " << entities << "\n"
      << "mentions             " << mentions << "\n"
      << "relation facts       " << facts << "\n"
      << "relation types       " << relation_types << "\n"
      << "mean entities / doc  " << mean << "\n";
  return out.str();
}

std::string StatsReport::ToJson() const {
  json j = {{"documents", documents},
            {"entities", entities},
            {"mentions", mentions},
            {"facts", facts},
            {"relation_types", relation_types},
            {"mean_entities_per_doc", mean_entities_per_doc}};
  return j.dump(2) + "\n";
}

namespace {

json DocumentToJson(const Document &d) {
  json ents = json::array();
  for (const Entity &e : d.entities) {
    json ms = json::array();
    for (const Mention &m : e.mentions) {
      ms.push_back({{"sent", m.sentence_index},
                    {"start", m.token_start},
                    {"end", m.token_end},
                    {"surface", m.surface}});
    }
    ents.push_back({{"mentions", ms}});
  }
  json facts = json::array();
  for (const RelationFact &f : d.facts) {
    facts.push_back({{"h", f.head}, {"t", f.tail}, {"r", f.relation}, {"evidence", f.evidence}});
  }
  return {{"title", d.title}, {"sentences", d.sentences}, {"entities", ents}, {"facts", facts}};
}

Document DocumentFromJson(const json &j) {
  Document d;
  d.title = j.at("title").get<std::string>();
  d.sentences = j.at("sentences").get<std::vector<std::vector<std::string>>>();
  int id = 0;
  for (const json &je : j.at("entities")) {
    Entity e;
    e.entity_id = id++;
    for (const json &jm : je.at("mentions")) {
      e.mentions.push_back({jm.at("sent").get<int>(), jm.at("start").get<int>(),
                            jm.at("end").get<int>(), jm.at("surface").get<std::string>()});
    }
    d.entities.push_back(std::move(e));
  }
  for (const json &jf : j.at("facts")) {
    d.facts.push_back({jf.at("h").get<int>(), jf.at("t").get<int>(), jf.at("r").get<int>(),
                       jf.at("evidence").get<std::vector<int>>()});
  }
  return d;
}

}  // namespace

std::string SerializeCorpus(const Corpus &corpus) {
  json docs = json::array();
  for (const Document &d : corpus.documents) docs.push_back(DocumentToJson(d));
  json j = {{"format", "docre-corpus"},
            {"version", 1},
            {"split", SplitName(corpus.split)},
            {"relations", corpus.schema.names()},
            {"documents", docs}};
  return j.dump() + "\n";
}

Corpus ParseCorpus(const std::string &text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception &e) {
    throw DataError(std::string("corpus file is not valid JSON: ") + e.what());
  }
  try {
    if (j.value("format", "") != "docre-corpus") throw DataError("not a canonical corpus file");
    Corpus c;
    c.split = ParseSplit(j.at("split").get<std::string>());
    c.schema = RelationSchema(j.at("relations").get<std::vector<std::string>>());
    for (const json &jd : j.at("documents")) c.documents.push_back(DocumentFromJson(jd));
    return c;
  } catch (const json::exception &e) {
    throw DataError(std::string("malformed corpus file: ") + e.what());
  }
}

void WriteCorpusFile(const std::string &path, const Corpus &corpus) {
  WriteTextFile(path, SerializeCorpus(corpus));
}

Corpus ReadCorpusFile(const std::string &path) { return ParseCorpus(ReadTextFile(path)); }

std::string ReadTextFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteTextFile(const std::string &path, const std::string &text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw DataError("failed writing " + path);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace docre
