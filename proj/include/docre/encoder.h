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

#ifndef DOCRE_ENCODER_H_
#define DOCRE_ENCODER_H_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "docre/autograd.h"
#include "docre/corpus.h"
#include "docre/params.h"

namespace docre {

class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;

  Vocabulary();
  // Tokens seen at least `min_count` times, ordered by descending frequency
  // then lexicographically, after the reserved entries. Throws ArgumentError
  // for a corpus without documents.
  static Vocabulary Build(const Corpus &corpus, int min_count);
  static Vocabulary FromTokens(std::vector<std::string> tokens);

  int Id(const std::string &token) const;
  size_t size() const { return tokens_.size(); }
  const std::vector<std::string> &tokens() const { return tokens_; }

  // One "token<TAB>id" line per entry, reserved ids first.
  std::string Serialize() const;
  static Vocabulary Parse(const std::string &text);

  bool operator==(const Vocabulary &other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

// Token ids of the whole document, sentences concatenated in order.
std::vector<int> DocumentTokenIds(const Document &doc, const Vocabulary &vocab);

struct EncoderConfig {
  int dim = 32;
  int max_len = 1024;
};

// Registry indices of the encoder's parameters.
struct EncoderParams {
  size_t token_embedding = 0;     // |V| x dim
  size_t position_embedding = 0;  // max_len x dim
  size_t mix_weight = 0;          // 3 dim x dim
  size_t mix_bias = 0;            // 1 x dim

  static EncoderParams Register(ParamRegistry &registry, size_t vocab_size,
                                const EncoderConfig &config, uint64_t seed);
};

// Windowed encoder standing in for a pre-trained language model:
//   u_j = token_emb(w_j) + pos_emb(j)
//   h_j = tanh(W_mix [u_{j-1}; u_j; u_{j+1}] + b)
// with zero vectors past either end of the document. Returns k x dim.
// Throws DataError if the document is longer than max_len.
Var Encode(Graph &graph, const ParamRegistry &registry, const EncoderParams &params,
           const EncoderConfig &config, const std::vector<int> &token_ids,
           const std::string &title);

// Per-parameter seed derived from a model seed and the parameter name.
uint64_t ParamSeed(uint64_t seed, const std::string &name);

}  // namespace docre

#endif  // DOCRE_ENCODER_H_
