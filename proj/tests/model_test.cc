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
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "docre/errors.h"
#include "docre/gradcheck.h"
#include "docre/model.h"
#include "docre/synthetic.h"

namespace docre {
namespace {

ModelConfig SmallConfig(int n_relations = 3) {
  ModelConfig c;
  c.d_w = 6;
  c.d_t = 3;
  c.d_dist = 2;
  c.layers = 2;
  c.n_relations = n_relations;
  c.max_len = 64;
  c.seed = 5;
  return c;
}

TEST(DistanceBucketTest, Table) {
  const std::vector<std::pair<long, int>> table = {
      {0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 3}, {5, 4}, {8, 4}, {9, 5}, {16, 5},
      {17, 6}, {32, 6}, {33, 7}, {64, 7}, {65, 8}, {100000, 8}};
  for (auto [d, b] : table) {
    EXPECT_EQ(DistanceBucket(d), b) << d;
    EXPECT_EQ(DistanceBucket(-d), -b) << d;
  }
}

TEST(ModelConfigTest, DerivedDimensions) {
  ModelConfig c;
  EXPECT_EQ(c.d_n(), 40);
  EXPECT_EQ(c.d_e(), 48);
  EXPECT_EQ(c.d_r(), 96);
}

TEST(ModelConfigTest, JsonRoundTripAndErrors) {
  ModelConfig c = SmallConfig();
  c.flags.use_logic_edges = false;
  c.literal_attention = true;
  c.context_includes_target = false;
  EXPECT_EQ(ModelConfig::FromJson(c.ToJson()), c);
  EXPECT_EQ(ModelConfig::FromJson(c.ToJson()).Hash(), c.Hash());
  EXPECT_NE(SmallConfig().Hash(), c.Hash());
  EXPECT_THROW(ModelConfig::FromJson(R"({"d_q": 3})"), ArgumentError);
  EXPECT_THROW(ModelConfig::FromJson("{"), ArgumentError);
  c.layers = 0;
  EXPECT_THROW(c.Validate(), ArgumentError);
  EXPECT_THROW(Model(c, 10), ArgumentError);
}

TEST(AttentionFuseTest, SingleEntityReturnsValueProjection) {
  Graph g;
  Var q = g.Constant(Tensor::FromRows({{1.0, 2.0}}));
  Var k = g.Constant(Tensor::FromRows({{-3.0, 0.5}}));
  Var v = g.Constant(Tensor::FromRows({{0.25, -1.0}}));
  Var w = g.Constant(Tensor::FromRows({{2.0, 0.0}, {1.0, 1.0}}));
  Tensor out = g.value(AttentionFuse(g, q, w, k, w, v, w, 2.0, false));
  EXPECT_DOUBLE_EQ(out(0, 0), -0.5);
  EXPECT_DOUBLE_EQ(out(0, 1), -1.0);
}

TEST(AttentionFuseTest, TwoEntitiesByHand) {
  Graph g;
  Var eye = g.Constant(Tensor::Identity(1));
  Var q = g.Constant(Tensor::FromRows({{1.0}, {2.0}}));
  Var k = g.Constant(Tensor::FromRows({{0.0}, {1.0}}));
  Var v = g.Constant(Tensor::FromRows({{10.0}, {20.0}}));
  Tensor out = g.value(AttentionFuse(g, q, eye, k, eye, v, eye, 4.0, false));
  // Scores q_i k_j / 2: row 0 (0, 0.5), row 1 (0, 1).
  auto mix = [](double s) { return (10.0 + 20.0 * std::exp(s)) / (1.0 + std::exp(s)); };
  EXPECT_NEAR(out(0, 0), mix(0.5), 1e-13);
  EXPECT_NEAR(out(1, 0), mix(1.0), 1e-13);
  Tensor literal = g.value(AttentionFuse(g, q, eye, k, eye, v, eye, 4.0, true));
  EXPECT_EQ(literal, Tensor::FromRows({{10.0}, {20.0}}));
}

TEST(AttentionFuseTest, ZeroQueryWeightsAverageValues) {
  Graph g;
  Var q = g.Constant(Tensor::FromRows({{1.0, 2.0}, {3.0, -1.0}, {0.0, 5.0}}));
  Var zero = g.Constant(Tensor(2, 2));
  Var eye = g.Constant(Tensor::Identity(2));
  Var v = g.Constant(Tensor::FromRows({{1.0, 0.0}, {2.0, 3.0}, {6.0, 3.0}}));
  Tensor out = g.value(AttentionFuse(g, q, zero, q, eye, v, eye, 2.0, false));
  for (size_t r = 0; r < 3; ++r) {
    EXPECT_NEAR(out(r, 0), 3.0, 1e-14);
    EXPECT_NEAR(out(r, 1), 2.0, 1e-14);
  }
  EXPECT_THROW(AttentionFuse(g, q, eye, g.Constant(Tensor(2, 2)), eye, v, eye, 2.0, false),
               DimensionError);
}

TEST(ContextTest, WeightsSumToOne) {
  Graph g;
  Var o = g.Constant(Tensor::FromRows({{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}}));
  Var w = g.Constant(Tensor::FromRows({{0.5, 0.2}, {-0.3, 1.0}}));
  // Every first coordinate is 1, so a convex combination keeps it at 1.
  Var ones = g.Constant(Tensor::FromRows({{1.0, 0.0}, {1.0, 1.0}, {1.0, 1.0}}));
  Tensor ctx = g.value(ContextRepresentations(g, ones, w, true));
  for (size_t r = 0; r < 3; ++r) EXPECT_NEAR(ctx(r, 0), 1.0, 1e-15);
  Tensor masked = g.value(ContextRepresentations(g, o, w, false));
  // Row 0 may not attend to itself: its first coordinate comes only from row 2.
  // theta_0 over rows {1, 2} with logits o_i W o_0^T = (-0.3, 0.2).
  const double t2 = 1.0 / (1.0 + std::exp(-0.5));
  EXPECT_NEAR(masked(0, 0), t2, 1e-14);
  EXPECT_NEAR(masked(0, 1), 1.0, 1e-14);
}

TEST(ContextTest, LonePair) {
  Graph g;
  Var o = g.Constant(Tensor::FromRows({{1.0, -2.0}}));
  Var w = g.Constant(Tensor::Identity(2));
  EXPECT_EQ(g.value(ContextRepresentations(g, o, w, false)), Tensor(1, 2));
  EXPECT_EQ(g.value(ContextRepresentations(g, o, w, true)), Tensor::FromRows({{1.0, -2.0}}));
}

class ModelTest : public ::testing::Test {
 protected:
  ModelTest() : doc_(TinyDocument()), vocab_(Vocabulary::Build(TinyCorpus(), 1)) {}
  Document doc_;
  Vocabulary vocab_;
};

TEST_F(ModelTest, PrepareTinyDocument) {
  Model m(SmallConfig(), vocab_.size());
  PreparedDocument p = m.Prepare(doc_, vocab_);
  EXPECT_EQ(p.num_entities(), 3u);
  EXPECT_EQ(p.num_sentences(), 2u);
  EXPECT_EQ(p.pairs, AllOrderedPairs(3));
  EXPECT_EQ(p.first_position, (std::vector<long>{0, 3, 9}));
  EXPECT_EQ(p.mention_spans[2], (std::pair<size_t, size_t>{5, 6}));
  EXPECT_EQ(p.labels(0, 0), 1.0);  // (0, 1) works_at
  EXPECT_EQ(p.labels(1, 2), 1.0);  // (0, 2) located_in
  EXPECT_EQ(p.labels(3, 1), 1.0);  // (1, 2) based_in
  double total = 0.0;
  for (double x : p.labels.values()) total += x;
  EXPECT_EQ(total, 3.0);
}

TEST_F(ModelTest, PrepareErrors) {
  ModelConfig c = SmallConfig();
  c.max_len = 5;
  EXPECT_THROW(Model(c, vocab_.size()).Prepare(doc_, vocab_), DataError);
  Model m(SmallConfig(2), vocab_.size());
  EXPECT_THROW(m.Prepare(doc_, vocab_), DataError);  // relation 2 outside schema
  Model ok(SmallConfig(), vocab_.size());
  std::vector<std::pair<int, int>> bad = {{1, 1}};
  EXPECT_THROW(ok.Prepare(doc_, vocab_, &bad), ArgumentError);
  Document lone = doc_;
  lone.entities.resize(1);
  lone.facts.clear();
  PreparedDocument p = ok.Prepare(lone, vocab_);
  Graph g;
  EXPECT_THROW(ok.Forward(g, p), ArgumentError);
}

TEST_F(ModelTest, ForwardShapes) {
  Model m(SmallConfig(), vocab_.size());
  PreparedDocument p = m.Prepare(doc_, vocab_);
  Graph g;
  ForwardResult r = m.Forward(g, p);
  const ModelConfig &c = m.config();
  EXPECT_EQ(g.value(r.hidden).rows(), doc_.NumTokens());
  EXPECT_EQ(g.value(r.dlg_nodes).rows(), 6u);
  EXPECT_EQ(g.value(r.dlg_nodes).cols(), static_cast<size_t>(c.d_n()));
  EXPECT_EQ(g.value(r.entity_elg).cols(), static_cast<size_t>(c.d_e()));
  EXPECT_EQ(g.value(r.entity_rep).rows(), 3u);
  EXPECT_EQ(g.value(r.pair_reps).cols(), static_cast<size_t>(c.d_r()));
  EXPECT_EQ(g.value(r.context).rows(), 6u);
  const Tensor &probs = g.value(r.probs);
  EXPECT_EQ(probs.rows(), 6u);
  EXPECT_EQ(probs.cols(), 3u);
  for (double x : probs.values()) {
    EXPECT_GT(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
}

TEST_F(ModelTest, DistanceBucketsOfTinyDocument) {
  ModelConfig c = SmallConfig();
  Model m(c, vocab_.size());
  PreparedDocument p = m.Prepare(doc_, vocab_);
  Graph g;
  ForwardResult r = m.Forward(g, p);
  const Tensor &dist = m.params().at(m.classifier().distance_embedding).value;
  const Tensor &o = g.value(r.pair_reps);
  // Pair (0, 1): Acme starts 3 tokens after Alice, bucket 3 forward, -3 back.
  const size_t dn = c.d_n(), dd = c.d_dist;
  for (size_t k = 0; k < dd; ++k) {
    EXPECT_EQ(o(0, dn + k), dist(kMaxDistanceBucket + 3, k));
    EXPECT_EQ(o(0, 2 * dn + dd + k), dist(kMaxDistanceBucket - 3, k));
  }
  // Pair (2, 0): Alice is 9 tokens before Paris, bucket -5.
  for (size_t k = 0; k < dd; ++k) EXPECT_EQ(o(4, dn + k), dist(kMaxDistanceBucket - 5, k));
}

TEST_F(ModelTest, EntityPoolingUsesLogSumExp) {
  Model m(SmallConfig(), vocab_.size());
  PreparedDocument p = m.Prepare(doc_, vocab_);
  Graph g;
  ForwardResult r = m.Forward(g, p);
  // Acme has two mentions; logsumexp is at least their mean and max.
  const Tensor &h = g.value(r.hidden);
  const Tensor &eh = g.value(r.entity_h);
  for (size_t c = 0; c < h.cols(); ++c) {
    const double a = h(3, c), b = h(5, c);
    EXPECT_NEAR(eh(1, c), std::log(std::exp(a) + std::exp(b)), 1e-14);
    EXPECT_GE(eh(1, c), std::max(a, b));
    EXPECT_NEAR(eh(0, c), h(0, c), 1e-15);  // single mention
  }
}

TEST_F(ModelTest, AblationFlags) {
  ModelConfig c = SmallConfig();
  c.flags.use_reasoning = false;
  Model m(c, vocab_.size());
  PreparedDocument p = m.Prepare(doc_, vocab_);
  Graph g;
  ForwardResult r = m.Forward(g, p);
  EXPECT_FALSE(r.entity_elg.valid());
  EXPECT_EQ(r.entity_rep.id, r.entity_dlg.id);
  c.flags.use_aggregation = false;
  Model both(c, vocab_.size());
  Graph g2;
  ForwardResult r2 = both.Forward(g2, both.Prepare(doc_, vocab_));
  EXPECT_TRUE(g2.value(r2.probs).AllFinite());
  c = SmallConfig();
  c.flags.use_logic_edges = false;
  PreparedDocument nl = Model(c, vocab_.size()).Prepare(doc_, vocab_);
  EXPECT_EQ(nl.elg_adjacency[1]->nnz(), 0u);
  EXPECT_EQ(p.elg_adjacency[1]->nnz(), 2u);
}

TEST_F(ModelTest, LiteralAttentionMakesFusionAValueProjection) {
  ModelConfig c = SmallConfig();
  c.literal_attention = true;
  Model m(c, vocab_.size());
  Graph g;
  ForwardResult r = m.Forward(g, m.Prepare(doc_, vocab_));
  Graph g2;
  Tensor expected = g2.value(g2.MatMul(g2.Constant(g.value(r.entity_h)),
                                       g2.Constant(m.params().at(m.fusion().w_h).value)));
  EXPECT_LT(g.value(r.entity_rep).MaxAbsDiff(expected), 1e-15);
  EXPECT_LT(g.value(r.entity_dlg).MaxAbsDiff(expected), 1e-15);
}

TEST_F(ModelTest, InitIsSeeded) {
  Model a(SmallConfig(), vocab_.size()), b(SmallConfig(), vocab_.size());
  ModelConfig other = SmallConfig();
  other.seed = 6;
  Model c(other, vocab_.size());
  ASSERT_EQ(a.params().size(), b.params().size());
  bool differs = false;
  for (size_t i = 0; i < a.params().size(); ++i) {
    EXPECT_EQ(a.params().at(i).value, b.params().at(i).value);
    differs |= !(a.params().at(i).value == c.params().at(i).value);
  }
  EXPECT_TRUE(differs);
}

TEST_F(ModelTest, SaveLoadRoundTrip) {
  Model m(SmallConfig(), vocab_.size());
  const std::string path =
      (std::filesystem::temp_directory_path() / "docre_model_test.ckpt").string();
  SaveModel(path, m, vocab_, TinySchema());
  LoadedModel l = LoadModel(path);
  std::remove(path.c_str());
  EXPECT_EQ(l.model->config(), m.config());
  EXPECT_EQ(l.vocab, vocab_);
  EXPECT_EQ(l.schema, TinySchema());
  Graph g1, g2;
  PreparedDocument p = m.Prepare(doc_, vocab_);
  EXPECT_EQ(g1.value(m.Forward(g1, p).probs), g2.value(l.model->Forward(g2, p).probs));
  EXPECT_THROW(LoadModel(path), DataError);
}

Document Relabel(const Document &d, const std::vector<int> &perm) {
  Document p = d;
  for (size_t i = 0; i < perm.size(); ++i) p.entities[perm[i]] = d.entities[i];
  for (size_t i = 0; i < perm.size(); ++i) p.entities[i].entity_id = static_cast<int>(i);
  for (RelationFact &f : p.facts) {
    f.head = perm[f.head];
    f.tail = perm[f.tail];
  }
  return p;
}

TEST(ModelPermutationTest, RelabelingEntitiesPermutesScores) {
  Corpus c = GenerateSynthetic(31, 8, RelationSchema::Numbered(3));
  Vocabulary vocab = Vocabulary::Build(c, 1);
  ModelConfig config = SmallConfig();
  config.max_len = 256;
  Model m(config, vocab.size());
  std::mt19937_64 rng(8);
  for (const Document &d : c.documents) {
    std::vector<int> perm(d.entities.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    PreparedDocument a = m.Prepare(d, vocab);
    PreparedDocument b = m.Prepare(Relabel(d, perm), vocab);
    Graph ga, gb;
    const Tensor pa = ga.value(m.Forward(ga, a).probs);
    const Tensor pb = gb.value(m.Forward(gb, b).probs);
    std::map<std::pair<int, int>, size_t> row_b;
    for (size_t i = 0; i < b.pairs.size(); ++i) row_b[b.pairs[i]] = i;
    for (size_t i = 0; i < a.pairs.size(); ++i) {
      const size_t j = row_b.at({perm[a.pairs[i].first], perm[a.pairs[i].second]});
      for (size_t r = 0; r < pa.cols(); ++r) EXPECT_NEAR(pa(i, r), pb(j, r), 1e-12);
    }
  }
}

TEST(ModelGradientTest, FullLossMatchesFiniteDifferences) {
  const Corpus tiny = TinyCorpus();
  Vocabulary vocab = Vocabulary::Build(tiny, 1);
  for (const bool literal : {false, true}) {
    ModelConfig c = SmallConfig();
    c.max_len = 16;
    c.literal_attention = literal;
    Model m(c, vocab.size());
    PreparedDocument p = m.Prepare(tiny.documents[0], vocab);
    Graph g;
    const double loss = g.value(m.Loss(g, p))[0];
    const double step = 1e-3;
    GradCheckReport rep = FiniteDifferenceCheck(
        [&](Graph &g) { return m.Loss(g, p); }, m.params(), {.step = step});
    EXPECT_EQ(rep.groups_checked.size(), m.params().size());
    EXPECT_EQ(rep.entries.size(), rep.coordinates_checked);
    // Central differences carry round-off of about eps |L| / h, which the
    // 1e-8 floor of the relative error cannot absorb for gradients near 1e-9
    // (saturated context attention). Such coordinates must agree to within
    // that noise; every other coordinate must meet 1e-4.
    const double ulp_loss = std::numeric_limits<double>::epsilon() * std::abs(loss);
    size_t tiny_gradients = 0;
    for (const GradCheckEntry &e : rep.entries) {
      if (e.rel_error < 1e-4) continue;
      ++tiny_gradients;
      EXPECT_LT(std::abs(e.analytic - e.numeric), 64.0 * ulp_loss / e.step)
          << e.param << "[" << e.coordinate << "] " << e.analytic << " vs " << e.numeric;
    }
    if (literal) EXPECT_LT(rep.max_rel_error, 1e-4);
    EXPECT_LT(tiny_gradients, rep.coordinates_checked / 100);
  }
}

}  // namespace
}  // namespace docre
