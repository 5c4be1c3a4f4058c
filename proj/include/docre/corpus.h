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

#ifndef DOCRE_CORPUS_H_
#define DOCRE_CORPUS_H_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace docre {

struct Mention {
  int sentence_index = 0;
  int token_start = 0;  // inclusive
  int token_end = 0;    // exclusive
  std::string surface;

  bool operator==(const Mention &) const = default;
};

struct Entity {
  int entity_id = 0;
  std::vector<Mention> mentions;

  bool operator==(const Entity &) const = default;
};

struct RelationFact {
  int head = 0;
  int tail = 0;
  int relation = 0;
  std::vector<int> evidence;

  bool operator==(const RelationFact &) const = default;
};

struct Document {
  std::string title;
  std::vector<std::vector<std::string>> sentences;
  std::vector<Entity> entities;
  std::vector<RelationFact> facts;

  size_t NumTokens() const;
  // Document position of each sentence's first token.
  std::vector<size_t> SentenceOffsets() const;
  // Document position of the earliest mention start of `entity`.
  size_t FirstMentionPosition(int entity) const;
  // Surface of the earliest mention; the cross-document identity of an entity.
  const std::string &EntityName(int entity) const;
  // True if the two entities have mentions in a common sentence.
  bool ShareSentence(int a, int b) const;

  bool operator==(const Document &) const = default;
};

class RelationSchema {
 public:
  RelationSchema() = default;
  // Throws SchemaError on duplicate names.
  explicit RelationSchema(std::vector<std::string> names);
  // Schema with names "rel0" .. "rel{n-1}".
  static RelationSchema Numbered(size_t n);

  size_t count() const { return names_.size(); }
  const std::vector<std::string> &names() const { return names_; }
  const std::string &name(int id) const { return names_.at(id); }
  // Throws SchemaError for unknown names.
  int Id(const std::string &name) const;
  bool Contains(const std::string &name) const { return ids_.count(name) > 0; }

  bool operator==(const RelationSchema &other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, int> ids_;
};

enum class Split { kTrain, kDev, kTest };

std::string SplitName(Split split);
Split ParseSplit(const std::string &name);

struct Corpus {
  std::vector<Document> documents;
  RelationSchema schema;
  Split split = Split::kTrain;

  bool operator==(const Corpus &) const = default;
};

struct Violation {
  enum class Kind {
    kNoSentences,
    kEmptySentence,
    kEmptyEntity,
    kBadSentenceIndex,
    kSpanOutOfRange,
    kBadEntityIndex,
    kSelfRelation,
    kDuplicateFact,
    kBadRelation,
  };
  Kind kind;
  std::string detail;
};

std::string ViolationKindName(Violation::Kind kind);

// All invariant violations of `doc`; empty iff the document is valid. The
// relation-id check runs only when `schema` is given.
std::vector<Violation> ValidateDocument(const Document &doc,
                                        const RelationSchema *schema = nullptr);

struct StatsReport {
  size_t documents = 0;
  size_t entities = 0;
  size_t mentions = 0;
  size_t facts = 0;
  size_t relation_types = 0;
  double mean_entities_per_doc = 0.0;  // rounded to 2 decimals

  std::string ToText() const;
  std::string ToJson() const;
};

StatsReport CorpusStats(const Corpus &corpus);

// Canonical JSON serialization of a corpus, lossless.
std::string SerializeCorpus(const Corpus &corpus);
Corpus ParseCorpus(const std::string &text);
void WriteCorpusFile(const std::string &path, const Corpus &corpus);
Corpus ReadCorpusFile(const std::string &path);

std::string ReadTextFile(const std::string &path);
// Writes through a temporary file and renames, so failed runs leave no
// partial artifact behind.
void WriteTextFile(const std::string &path, const std::string &text);

}  // namespace docre

#endif  // DOCRE_CORPUS_H_
