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

#include "docre/errors.h"
#include "docre/synthetic.h"

namespace docre {
namespace {

TEST(SyntheticTest, DeterministicPerSeed) {
  const RelationSchema schema = RelationSchema::Numbered(5);
  EXPECT_EQ(SerializeCorpus(GenerateSynthetic(4, 25, schema)),
            SerializeCorpus(GenerateSynthetic(4, 25, schema)));
  EXPECT_NE(SerializeCorpus(GenerateSynthetic(4, 25, schema)),
            SerializeCorpus(GenerateSynthetic(5, 25, schema)));
}

TEST(SyntheticTest, DocumentsAreValidAndLabelled) {
  const RelationSchema schema = RelationSchema::Numbered(6);
  GeneratorKnobs knobs;
  knobs.split = Split::kDev;
  Corpus c = GenerateSynthetic(9, 60, schema, knobs);
  EXPECT_EQ(c.documents.size(), 60u);
  EXPECT_EQ(c.split, Split::kDev);
  EXPECT_EQ(c.schema, schema);
  size_t facts = 0;
  for (const Document &d : c.documents) {
    EXPECT_TRUE(ValidateDocument(d, &schema).empty()) << d.title;
    EXPECT_GE(d.entities.size(), static_cast<size_t>(knobs.min_entities));
    EXPECT_LE(d.entities.size(), static_cast<size_t>(knobs.max_entities));
    EXPECT_GE(d.sentences.size(), static_cast<size_t>(knobs.min_sentences));
    facts += d.facts.size();
  }
  EXPECT_GT(facts, 0u);
}

TEST(SyntheticTest, InterFractionExtremes) {
  const RelationSchema schema = RelationSchema::Numbered(4);
  for (double frac : {0.0, 1.0}) {
    GeneratorKnobs knobs;
    knobs.inter_fraction = frac;
    Corpus c = GenerateSynthetic(13, 40, schema, knobs);
    for (const Document &d : c.documents) {
      for (const RelationFact &f : d.facts) {
        EXPECT_EQ(d.ShareSentence(f.head, f.tail), frac == 0.0) << d.title;
      }
    }
  }
}

TEST(SyntheticTest, TriggersAppearInText) {
  const RelationSchema schema = RelationSchema::Numbered(3);
  GeneratorKnobs knobs;
  knobs.inter_fraction = 0.0;
  Corpus c = GenerateSynthetic(2, 10, schema, knobs);
  for (const Document &d : c.documents) {
    for (const RelationFact &f : d.facts) {
      const std::string trig = IntraTrigger(schema.name(f.relation));
      bool found = false;
      for (const auto &s : d.sentences) {
        for (const auto &t : s) found |= t == trig;
      }
      EXPECT_TRUE(found) << trig;
    }
  }
}

TEST(SyntheticTest, ArgumentErrors) {
  EXPECT_THROW(GenerateSynthetic(1, 0, RelationSchema::Numbered(2)), ArgumentError);
  EXPECT_THROW(GenerateSynthetic(1, 3, RelationSchema()), ArgumentError);
}

TEST(SyntheticTest, TinyDocument) {
  Corpus c = TinyCorpus();
  ASSERT_EQ(c.documents.size(), 1u);
  const Document &d = c.documents[0];
  EXPECT_TRUE(ValidateDocument(d, &c.schema).empty());
  EXPECT_EQ(d.sentences.size(), 2u);
  EXPECT_EQ(d.entities.size(), 3u);
  EXPECT_EQ(d.EntityName(1), "Acme");
  EXPECT_TRUE(d.ShareSentence(0, 1));
  EXPECT_FALSE(d.ShareSentence(0, 2));
  EXPECT_EQ(c.schema.Id("located_in"), 2);
}

}  // namespace
}  // namespace docre
