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


#include <gtest/gtest.h>

#include "docre/docred.h"
#include "docre/errors.h"
#include "docre/synthetic.h"

namespace docre {
namespace {

const char *kRecord = R"([{
  "title": "Acme",
  "sents": [["Alice", "works", "at", "Acme", "."], ["Acme", "is", "based", "in", "Paris", "."]],
  "vertexSet": [
    [{"name": "Alice", "sent_id": 0, "pos": [0, 1], "type": "PER"}],
    [{"name": "Acme", "sent_id": 0, "pos": [3, 4], "type": "ORG"},
     {"name": "Acme", "sent_id": 1, "pos": [0, 1], "type": "ORG"},
     {"name": "Acme", "sent_id": 1, "pos": [0, 1], "type": "ORG"}],
    [{"name": "Paris", "sent_id": 1, "pos": [4, 5], "type": "LOC"}]
  ],
  "labels": [
    {"h": 1, "t": 2, "r": "P159", "evidence": [1]},
    {"h": 1, "t": 2, "r": "P159", "evidence": [0, 1]},
    {"h": 0, "t": 1, "r": "P108", "evidence": [0]}
  ]
}])";

RelationSchema Schema() { return RelationSchema({"P108", "P159", "P131"}); }

TEST(DocredTest, ParsesRecord) {
  Corpus c = ParseDocred(kRecord, Schema(), Split::kTrain);
  ASSERT_EQ(c.documents.size(), 1u);
  const Document &d = c.documents[0];
  EXPECT_EQ(d.title, "Acme");
  EXPECT_EQ(d.sentences.size(), 2u);
  ASSERT_EQ(d.entities.size(), 3u);
  EXPECT_EQ(d.entities[1].mentions.size(), 2u);  // identical span deduplicated
  EXPECT_EQ(d.entities[2].mentions[0].token_start, 4);
  ASSERT_EQ(d.facts.size(), 2u);  // repeated label merged
  EXPECT_EQ(d.facts[0].relation, 1);
  EXPECT_EQ(d.facts[0].evidence, (std::vector<int>{1, 0}));
  EXPECT_EQ(d.facts[1].head, 0);
  EXPECT_TRUE(ValidateDocument(d, &c.schema).empty());
}

TEST(DocredTest, EmptyArrayGivesEmptyCorpus) {
  EXPECT_TRUE(ParseDocred("[]", Schema(), Split::kDev).documents.empty());
}

TEST(DocredTest, UnlabelledRecordsHaveNoFacts) {
  const std::string text = R"([{"title": "t", "sents": [["a", "b"]],
      "vertexSet": [[{"name": "a", "sent_id": 0, "pos": [0, 1]}]]}])";
  Corpus c = ParseDocred(text, Schema(), Split::kTest);
  ASSERT_EQ(c.documents.size(), 1u);
  EXPECT_TRUE(c.documents[0].facts.empty());
}

void ExpectIngestError(const std::string &text, const std::string &fragment) {
  try {
    ParseDocred(text, Schema(), Split::kTrain);
    FAIL() << "expected IngestError containing " << fragment;
  } catch (const IngestError &e) {
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

TEST(DocredTest, MalformedRecordsNameDocumentAndField) {
  const std::string ok = R"({"title": "t", "sents": [["a"]], "vertexSet": [[{"name": "a", "sent_id": 0, "pos": [0, 1]}]]})";
  ExpectIngestError("[" + ok + R"(, {"title": "u", "vertexSet": []}])", "document 1, field 'sents'");
  ExpectIngestError(R"([{"title": "t", "sents": [["a"]], "vertexSet": [[{"name": "a", "sent_id": 3, "pos": [0, 1]}]]}])",
                    "document 0, field 'vertexSet[0][0].sent_id'");
  ExpectIngestError(R"([{"title": "t", "sents": [["a"]], "vertexSet": [[{"name": "a", "sent_id": 0, "pos": [0, 2]}]]}])",
                    "vertexSet[0][0].pos");
  ExpectIngestError(R"([{"title": "t", "sents": [["a"]], "vertexSet": [[{"name": "a", "sent_id": 0, "pos": [0, 1]}]],
                        "labels": [{"h": 0, "t": 4, "r": "P108"}]}])",
                    "labels[0]");
  ExpectIngestError("{}", "top-level array");
  ExpectIngestError("[", "not valid JSON");
}

TEST(DocredTest, UnknownRelationIsSchemaError) {
  const std::string text = R"([{"title": "t", "sents": [["a", "b"]],
      "vertexSet": [[{"name": "a", "sent_id": 0, "pos": [0, 1]}], [{"name": "b", "sent_id": 0, "pos": [1, 2]}]],
      "labels": [{"h": 0, "t": 1, "r": "P999"}]}])";
  EXPECT_THROW(ParseDocred(text, Schema(), Split::kTrain), SchemaError);
}

TEST(DocredTest, SerializeRoundTrip) {
  Corpus c = GenerateSynthetic(4, 6, RelationSchema::Numbered(3));
  Corpus back = ParseDocred(SerializeDocred(c), c.schema, c.split);
  EXPECT_EQ(back, c);
}

TEST(SchemaFileTest, JsonMapping) {
  RelationSchema s = ParseSchema(R"({"P159": 1, "P108": 0})");
  EXPECT_EQ(s.names(), (std::vector<std::string>{"P108", "P159"}));
  EXPECT_EQ(ParseSchema(SerializeSchema(s)), s);
}

TEST(SchemaFileTest, TsvMapping) {
  RelationSchema s = ParseSchema("0\tP108\n1\tP159\n");
  EXPECT_EQ(s.Id("P159"), 1);
}

TEST(SchemaFileTest, Errors) {
  EXPECT_THROW(ParseSchema(R"({"a": 0, "b": 0})"), SchemaError);
  EXPECT_THROW(ParseSchema(R"({"a": 0, "b": 2})"), SchemaError);
  EXPECT_THROW(ParseSchema("0 P108\n"), SchemaError);
  EXPECT_THROW(ParseSchema("x\tP108\n"), SchemaError);
}

}  // namespace
}  // namespace docre
