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


#include <cmath>

#include <gtest/gtest.h>

#include "docre/encoder.h"
#include "docre/errors.h"
#include "docre/synthetic.h"

namespace docre {
namespace {

Corpus OneDoc(std::vector<std::vector<std::string>> sentences) {
  Corpus c;
  Document d;
  d.sentences = std::move(sentences);
  c.documents.push_back(d);
  return c;
}

TEST(VocabularyTest, FrequencyThenLexicographicOrder) {
  Vocabulary v = Vocabulary::Build(OneDoc({{"b", "a", "c", "a"}, {"c", "d", "a"}}), 1);
  EXPECT_EQ(v.tokens(), (std::vector<std::string>{"<pad>", "<unk>", "a", "c", "b", "d"}));
  EXPECT_EQ(v.Id("a"), 2);
  EXPECT_EQ(v.Id("zzz"), Vocabulary::kUnk);
}

TEST(VocabularyTest, MinCountDropsRareTokens) {
  Vocabulary v = Vocabulary::Build(OneDoc({{"b", "a", "c", "a"}, {"c", "d", "a"}}), 2);
  EXPECT_EQ(v.size(), 4u);
  EXPECT_EQ(v.Id("b"), Vocabulary::kUnk);
  EXPECT_EQ(v.Id("c"), 3);
  EXPECT_THROW(Vocabulary::Build(Corpus{}, 1), ArgumentError);
}

TEST(VocabularyTest, MinCountEdges) {
  Corpus c = OneDoc({{"Acme", "Acme", "Acme", "x"}, {"Acme", "Acme"}});
  EXPECT_NE(Vocabulary::Build(c, 2).Id("Acme"), Vocabulary::kUnk);
  EXPECT_EQ(Vocabulary::Build(c, 1000000000).size(), 2u);
}

TEST(VocabularyTest, SerializeRoundTrip) {
  Vocabulary v = Vocabulary::Build(TinyCorpus(), 1);
  EXPECT_EQ(Vocabulary::Parse(v.Serialize()), v);
  EXPECT_THROW(Vocabulary::Parse("a\t0\n"), DataError);
  EXPECT_THROW(Vocabulary::Parse("<pad>\t0\n<unk>\t2\n"), DataError);
  EXPECT_THROW(Vocabulary::Parse("<pad>\t0\nnotab\n"), DataError);
}

TEST(VocabularyTest, DocumentTokenIds) {
  const Document d = TinyDocument();
  Vocabulary v = Vocabulary::FromTokens({"Acme", "."});
  std::vector<int> ids = DocumentTokenIds(d, v);
  ASSERT_EQ(ids.size(), d.NumTokens());
  EXPECT_EQ(ids[0], Vocabulary::kUnk);  // Alice
  EXPECT_EQ(ids[3], 2);                 // Acme
  EXPECT_EQ(ids[4], 3);                 // .
  EXPECT_EQ(ids[5], 2);                 // Acme
}

class EncoderTest : public ::testing::Test {
 protected:
  void SetUp() override {
    config_.dim = 6;
    config_.max_len = 16;
    params_ = EncoderParams::Register(registry_, 10, config_, 3);
  }
  Tensor Run(const std::vector<int> &ids) {
    Graph g;
    return g.value(Encode(g, registry_, params_, config_, ids, "t"));
  }
  ParamRegistry registry_;
  EncoderConfig config_;
  EncoderParams params_;
};

TEST_F(EncoderTest, ShapesAndInit) {
  EXPECT_EQ(registry_.at(params_.token_embedding).value.rows(), 10u);
  EXPECT_EQ(registry_.at(params_.position_embedding).value.rows(), 16u);
  EXPECT_EQ(registry_.at(params_.mix_weight).value.rows(), 18u);
  Tensor h = Run({2, 3, 4, 5});
  EXPECT_EQ(h.rows(), 4u);
  EXPECT_EQ(h.cols(), 6u);
  for (double x : h.values()) EXPECT_LT(std::abs(x), 1.0);
}

TEST_F(EncoderTest, ZeroMixGivesTanhOfBias) {
  registry_.at(params_.mix_weight).value.Fill(0.0);
  registry_.at(params_.mix_bias).value.Fill(0.5);
  Tensor h = Run({2, 3, 4});
  for (double x : h.values()) EXPECT_DOUBLE_EQ(x, std::tanh(0.5));
}

TEST_F(EncoderTest, WindowIsLocal) {
  Tensor a = Run({2, 3, 4, 5, 6, 7});
  Tensor b = Run({2, 3, 4, 5, 6, 9});
  for (size_t j = 0; j < 4; ++j) {
    for (size_t c = 0; c < 6; ++c) EXPECT_EQ(a(j, c), b(j, c)) << j;
  }
  double diff = 0.0;
  for (size_t j = 4; j < 6; ++j) {
    for (size_t c = 0; c < 6; ++c) diff += std::abs(a(j, c) - b(j, c));
  }
  EXPECT_GT(diff, 0.0);
}

TEST_F(EncoderTest, PositionMatters) {
  Tensor h = Run({2, 2, 2, 2, 2});
  EXPECT_GT(std::abs(h(1, 0) - h(2, 0)) + std::abs(h(1, 1) - h(2, 1)), 0.0);
}

TEST_F(EncoderTest, LengthErrors) {
  EXPECT_THROW(Run(std::vector<int>(17, 2)), DataError);
  EXPECT_NO_THROW(Run(std::vector<int>(16, 2)));
  EXPECT_THROW(Run({}), DataError);
  ParamRegistry r;
  EXPECT_THROW(EncoderParams::Register(r, 5, {0, 4}, 1), ArgumentError);
}

TEST(ParamSeedTest, DependsOnSeedAndName) {
  EXPECT_EQ(ParamSeed(1, "a"), ParamSeed(1, "a"));
  EXPECT_NE(ParamSeed(1, "a"), ParamSeed(2, "a"));
  EXPECT_NE(ParamSeed(1, "a"), ParamSeed(1, "b"));
}

}  // namespace
}  // namespace docre
