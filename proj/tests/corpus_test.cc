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


#include <filesystem>

#include <gtest/gtest.h>

#include "docre/corpus.h"
#include "docre/errors.h"
#include "docre/synthetic.h"

namespace docre {
namespace {

std::vector<Violation::Kind> Kinds(const Document &d, const RelationSchema *s = nullptr) {
  std::vector<Violation::Kind> out;
  for (const Violation &v : ValidateDocument(d, s)) out.push_back(v.kind);
  return out;
}

Document WithEntities(size_t n) {
  Document d;
  d.title = "d";
  d.sentences = {{"a", "b", "c"}};
  for (size_t i = 0; i < n; ++i) d.entities.push_back({static_cast<int>(i), {{0, 0, 1, "a"}}});
  return d;
}

TEST(DocumentTest, TinyDocumentIsValid) {
  const RelationSchema s = TinySchema();
  EXPECT_TRUE(ValidateDocument(TinyDocument(), &s).empty());
}

TEST(DocumentTest, Accessors) {
  const Document d = TinyDocument();
  EXPECT_EQ(d.NumTokens(), 11u);
  EXPECT_EQ(d.SentenceOffsets(), (std::vector<size_t>{0, 5}));
  EXPECT_EQ(d.FirstMentionPosition(0), 0u);
  EXPECT_EQ(d.FirstMentionPosition(1), 3u);
  EXPECT_EQ(d.FirstMentionPosition(2), 9u);
  EXPECT_EQ(d.EntityName(1), "Acme");
  EXPECT_TRUE(d.ShareSentence(0, 1));
  EXPECT_TRUE(d.ShareSentence(1, 2));
  EXPECT_FALSE(d.ShareSentence(0, 2));
}

TEST(DocumentTest, SpanPastSentenceEnd) {
  Document d = TinyDocument();
  d.entities[0].mentions[0].token_end = 6;
  EXPECT_EQ(Kinds(d), std::vector<Violation::Kind>{Violation::Kind::kSpanOutOfRange});
}

TEST(DocumentTest, SelfRelation) {
  Document d = TinyDocument();
  d.facts.push_back({2, 2, 0, {}});
  EXPECT_EQ(Kinds(d), std::vector<Violation::Kind>{Violation::Kind::kSelfRelation});
}

TEST(DocumentTest, OtherViolations) {
  Document d = TinyDocument();
  d.facts.push_back(d.facts[0]);
  EXPECT_EQ(Kinds(d), std::vector<Violation::Kind>{Violation::Kind::kDuplicateFact});

  d = TinyDocument();
  d.facts.push_back({0, 7, 0, {}});
  EXPECT_EQ(Kinds(d), std::vector<Violation::Kind>{Violation::Kind::kBadEntityIndex});

  d = TinyDocument();
  d.entities[2].mentions[0].sentence_index = 4;
  EXPECT_EQ(Kinds(d), std::vector<Violation::Kind>{Violation::Kind::kBadSentenceIndex});

  d = TinyDocument();
  d.entities[2].mentions.clear();
  EXPECT_EQ(Kinds(d), std::vector<Violation::Kind>{Violation::Kind::kEmptyEntity});

  d = TinyDocument();
  d.sentences.push_back({});
  EXPECT_EQ(Kinds(d), std::vector<Violation::Kind>{Violation::Kind::kEmptySentence});

  d = TinyDocument();
  const RelationSchema two = RelationSchema::Numbered(2);
  EXPECT_EQ(Kinds(d, &two), std::vector<Violation::Kind>{Violation::Kind::kBadRelation});

  Document empty;
  EXPECT_EQ(Kinds(empty), std::vector<Violation::Kind>{Violation::Kind::kNoSentences});
}

TEST(SchemaTest, NamesAndIds) {
  RelationSchema s({"P17", "P131"});
  EXPECT_EQ(s.count(), 2u);
  EXPECT_EQ(s.Id("P131"), 1);
  EXPECT_EQ(s.name(0), "P17");
  EXPECT_THROW(s.Id("P999"), SchemaError);
  EXPECT_THROW(RelationSchema({"a", "a"}), SchemaError);
  EXPECT_EQ(RelationSchema::Numbered(3).names(), (std::vector<std::string>{"rel0", "rel1", "rel2"}));
}

TEST(SplitTest, Names) {
  EXPECT_EQ(ParseSplit("dev"), Split::kDev);
  EXPECT_EQ(SplitName(Split::kTest), "test");
  EXPECT_THROW(ParseSplit("validation"), ArgumentError);
}

TEST(StatsTest, SingleDocument) {
  Corpus c{{WithEntities(3)}, RelationSchema::Numbered(1), Split::kTrain};
  EXPECT_DOUBLE_EQ(CorpusStats(c).mean_entities_per_doc, 3.0);
}

TEST(StatsTest, MeanOverDocuments) {
  Corpus c{{WithEntities(2), WithEntities(4)}, RelationSchema::Numbered(1), Split::kTrain};
  StatsReport s = CorpusStats(c);
  EXPECT_EQ(s.documents, 2u);
  EXPECT_EQ(s.entities, 6u);
  EXPECT_DOUBLE_EQ(s.mean_entities_per_doc, 3.0);
}

TEST(StatsTest, RoundsToTwoDecimals) {
  Corpus c{{WithEntities(1), WithEntities(1), WithEntities(2)}, RelationSchema::Numbered(1),
           Split::kTrain};
  EXPECT_DOUBLE_EQ(CorpusStats(c).mean_entities_per_doc, 1.33);
  EXPECT_DOUBLE_EQ(CorpusStats(Corpus{}).mean_entities_per_doc, 0.0);
}

TEST(StatsTest, MatchesBruteForceOnSyntheticCorpus) {
  Corpus c = GenerateSynthetic(3, 40, RelationSchema::Numbered(5));
  size_t entities = 0, mentions = 0, facts = 0;
  for (const Document &d : c.documents) {
    entities += d.entities.size();
    facts += d.facts.size();
    for (const Entity &e : d.entities) mentions += e.mentions.size();
  }
  StatsReport s = CorpusStats(c);
  EXPECT_EQ(s.entities, entities);
  EXPECT_EQ(s.mentions, mentions);
  EXPECT_EQ(s.facts, facts);
  EXPECT_EQ(s.relation_types, 5u);
  EXPECT_NEAR(s.mean_entities_per_doc, static_cast<double>(entities) / 40.0, 0.005);
  EXPECT_NE(s.ToText().find("documents"), std::string::npos);
  EXPECT_NE(s.ToJson().find("\"documents\": 40"), std::string::npos);
}

TEST(SerializationTest, RoundTripIsLossless) {
  Corpus c = GenerateSynthetic(9, 5, RelationSchema::Numbered(3));
  c.documents.push_back(TinyDocument());
  c.split = Split::kDev;
  EXPECT_EQ(ParseCorpus(SerializeCorpus(c)), c);
  const std::string path = ::testing::TempDir() + "/corpus_test.json";
  WriteCorpusFile(path, c);
  EXPECT_EQ(ReadCorpusFile(path), c);
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  std::filesystem::remove(path);
}

TEST(SerializationTest, RejectsForeignFiles) {
  EXPECT_THROW(ParseCorpus("[1, 2"), DataError);
  EXPECT_THROW(ParseCorpus(R"({"format": "other"})"), DataError);
  EXPECT_THROW(ReadCorpusFile("/nonexistent/corpus.json"), DataError);
}

}  // namespace
}  // namespace docre
