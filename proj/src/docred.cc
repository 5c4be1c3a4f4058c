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

#include "docre/docred.h"

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>

#include "docre/errors.h"
#include "json.hpp"

namespace docre {

using json = nlohmann::json;

namespace {

[[noreturn]] void Fail(size_t doc, const std::string &field, const std::string &why) {
  throw IngestError("document " + std::to_string(doc) + ", field '" + field + "': " + why);
}

// `label` names the field in error messages; it defaults to the key.
const json &Field(const json &obj, size_t doc, const std::string &key,
                  const std::string &label = "") {
  if (!obj.is_object() || !obj.contains(key)) Fail(doc, label.empty() ? key : label, "missing");
  return obj.at(key);
}

int AsInt(const json &v, size_t doc, const std::string &field) {
  if (!v.is_number_integer()) Fail(doc, field, "expected an integer");
  return v.get<int>();
}

Document ParseRecord(const json &rec, size_t index, const RelationSchema &schema) {
  Document d;
  const json &title = Field(rec, index, "title");
  if (!title.is_string()) Fail(index, "title", "expected a string");
  d.title = title.get<std::string>();

  const json &sents = Field(rec, index, "sents");
  if (!sents.is_array()) Fail(index, "sents", "expected an array of token lists");
  for (const json &s : sents) {
    if (!s.is_array()) Fail(index, "sents", "expected an array of token lists");
    std::vector<std::string> tokens;
    for (const json &t : s) {
      if (!t.is_string()) Fail(index, "sents", "token is not a string");
      tokens.push_back(t.get<std::string>());
    }
    d.sentences.push_back(std::move(tokens));
  }

  const json &vertices = Field(rec, index, "vertexSet");
  if (!vertices.is_array()) Fail(index, "vertexSet", "expected an array of mention groups");
  for (size_t e = 0; e < vertices.size(); ++e) {
    const json &group = vertices[e];
    const std::string field = "vertexSet[" + std::to_string(e) + "]";
    if (!group.is_array() || group.empty()) Fail(index, field, "expected a nonempty array");
    Entity ent;
    ent.entity_id = static_cast<int>(e);
    for (size_t k = 0; k < group.size(); ++k) {
      const json &jm = group[k];
      const std::string mfield = field + "[" + std::to_string(k) + "]";
      Mention m;
      m.sentence_index =
          AsInt(Field(jm, index, "sent_id", mfield + ".sent_id"), index, mfield + ".sent_id");
      const json &pos = Field(jm, index, "pos", mfield + ".pos");
      if (!pos.is_array() || pos.size() != 2) Fail(index, mfield + ".pos", "expected [start, end]");
      m.token_start = AsInt(pos[0], index, mfield + ".pos");
      m.token_end = AsInt(pos[1], index, mfield + ".pos");
      if (m.sentence_index < 0 || static_cast<size_t>(m.sentence_index) >= d.sentences.size()) {
        Fail(index, mfield + ".sent_id", "sentence id out of range");
      }
      const int len = static_cast<int>(d.sentences[m.sentence_index].size());
      if (m.token_start < 0 || m.token_start >= m.token_end || m.token_end > len) {
        Fail(index, mfield + ".pos", "span out of range");
      }
      const json &name = Field(jm, index, "name", mfield + ".name");
      if (!name.is_string()) Fail(index, mfield + ".name", "expected a string");
      m.surface = name.get<std::string>();
      const bool duplicate = std::any_of(ent.mentions.begin(), ent.mentions.end(),
                                         [&](const Mention &o) {
                                           return o.sentence_index == m.sentence_index &&
                                                  o.token_start == m.token_start &&
                                                  o.token_end == m.token_end;
                                         });
      if (!duplicate) ent.mentions.push_back(std::move(m));
    }
    d.entities.push_back(std::move(ent));
  }

  if (rec.contains("labels")) {
    const json &labels = rec.at("labels");
    if (!labels.is_array()) Fail(index, "labels", "expected an array");
    std::map<std::tuple<int, int, int>, size_t> seen;
    for (size_t l = 0; l < labels.size(); ++l) {
      const json &jl = labels[l];
      const std::string field = "labels[" + std::to_string(l) + "]";
      RelationFact f;
      f.head = AsInt(Field(jl, index, "h", field + ".h"), index, field + ".h");
      f.tail = AsInt(Field(jl, index, "t", field + ".t"), index, field + ".t");
      const json &r = Field(jl, index, "r", field + ".r");
      if (!r.is_string()) Fail(index, field + ".r", "expected a relation name");
      f.relation = schema.Id(r.get<std::string>());
      const int ne = static_cast<int>(d.entities.size());
      if (f.head < 0 || f.head >= ne || f.tail < 0 || f.tail >= ne) {
        Fail(index, field, "entity index out of range");
      }
      if (jl.contains("evidence")) {
        for (const json &ev : jl.at("evidence")) f.evidence.push_back(AsInt(ev, index, field));
      }
      auto key = std::make_tuple(f.head, f.tail, f.relation);
      auto it = seen.find(key);
      if (it != seen.end()) {
        auto &ev = d.facts[it->second].evidence;
        for (int s : f.evidence) {
          if (std::find(ev.begin(), ev.end(), s) == ev.end()) ev.push_back(s);
        }
        continue;
      }
      seen[key] = d.facts.size();
      d.facts.push_back(std::move(f));
    }
  }
  return d;
}

}  // namespace

Corpus ParseDocred(const std::string &text, const RelationSchema &schema, Split split) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception &e) {
    throw IngestError(std::string("DocRED file is not valid JSON: ") + e.what());
  }
  if (!j.is_array()) throw IngestError("DocRED file must hold a top-level array of documents");
  Corpus c;
  c.schema = schema;
  c.split = split;
  c.documents.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i) c.documents.push_back(ParseRecord(j[i], i, schema));
  return c;
}

Corpus LoadDocred(const std::string &path, const RelationSchema &schema, Split split) {
  return ParseDocred(ReadTextFile(path), schema, split);
}

std::string SerializeDocred(const Corpus &corpus) {
  json out = json::array();
  for (const Document &d : corpus.documents) {
    json vs = json::array();
    for (const Entity &e : d.entities) {
      json group = json::array();
      for (const Mention &m : e.mentions) {
        group.push_back({{"name", m.surface},
                         {"sent_id", m.sentence_index},
                         {"pos", {m.token_start, m.token_end}}});
      }
      vs.push_back(group);
    }
    json labels = json::array();
    for (const RelationFact &f : d.facts) {
      labels.push_back({{"h", f.head},
                        {"t", f.tail},
                        {"r", corpus.schema.name(f.relation)},
                        {"evidence", f.evidence}});
    }
    out.push_back({{"title", d.title}, {"sents", d.sentences}, {"vertexSet", vs},
                   {"labels", labels}});
  }
  return out.dump() + "\n";
}

RelationSchema ParseSchema(const std::string &text) {
  std::map<int, std::string> by_id;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    try {
      const json mapping = json::parse(text);
      for (const auto &[name, id] : mapping.items()) {
        if (!by_id.emplace(id.get<int>(), name).second) {
          throw SchemaError("relation id " + std::to_string(id.get<int>()) + " used twice");
        }
      }
    } catch (const json::exception &e) {
      throw SchemaError(std::string("malformed relation mapping: ") + e.what());
    }
  } else {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos) {
        throw SchemaError("relation mapping line " + std::to_string(lineno) + " lacks a tab");
      }
      int id = 0;
      try {
        size_t used = 0;
        id = std::stoi(line.substr(0, tab), &used);
        if (used != tab) throw std::invalid_argument("trailing");
      } catch (const std::exception &) {
        throw SchemaError("relation mapping line " + std::to_string(lineno) + ": bad id");
      }
      if (!by_id.emplace(id, line.substr(tab + 1)).second) {
        throw SchemaError("relation id " + std::to_string(id) + " used twice");
      }
    }
  }
  std::vector<std::string> names;
  for (const auto &[id, name] : by_id) {
    if (id != static_cast<int>(names.size())) {
      throw SchemaError("relation ids must be dense from 0; missing " +
                        std::to_string(names.size()));
    }
    names.push_back(name);
  }
  return RelationSchema(std::move(names));
}

RelationSchema LoadSchema(const std::string &path) { return ParseSchema(ReadTextFile(path)); }

std::string SerializeSchema(const RelationSchema &schema) {
  std::string out;
  for (size_t i = 0; i < schema.count(); ++i) {
    out += std::to_string(i) + "\t" + schema.names()[i] + "\n";
  }
  return out;
}

}  // namespace docre
