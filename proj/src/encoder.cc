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

#include "docre/encoder.h"

#include <algorithm>
#include <map>
#include <sstream>

#include "docre/errors.h"

namespace docre {

Vocabulary::Vocabulary() : tokens_{"<pad>", "<unk>"} {
  ids_["<pad>"] = kPad;
  ids_["<unk>"] = kUnk;
}

Vocabulary Vocabulary::FromTokens(std::vector<std::string> tokens) {
  Vocabulary v;
  for (auto &t : tokens) {
    if (v.ids_.count(t)) continue;
    v.ids_[t] = static_cast<int>(v.tokens_.size());
    v.tokens_.push_back(std::move(t));
  }
  return v;
}

Vocabulary Vocabulary::Build(const Corpus &corpus, int min_count) {
  if (corpus.documents.empty()) throw ArgumentError("cannot build a vocabulary from no documents");
  std::map<std::string, long> freq;
  for (const Document &d : corpus.documents) {
    for (const auto &s : d.sentences) {
      for (const auto &t : s) ++freq[t];
    }
  }
  std::vector<std::pair<std::string, long>> kept;
  for (auto &[tok, n] : freq) {
    if (n >= min_count) kept.emplace_back(tok, n);
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto &a, const auto &b) { return a.second > b.second; });
  std::vector<std::string> tokens;
  for (auto &[tok, n] : kept) tokens.push_back(tok);
  return FromTokens(std::move(tokens));
}

int Vocabulary::Id(const std::string &token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? kUnk : it->second;
}

std::string Vocabulary::Serialize() const {
  std::string out;
  for (size_t i = 0; i < tokens_.size(); ++i) out += tokens_[i] + "\t" + std::to_string(i) + "\n";
  return out;
}

Vocabulary Vocabulary::Parse(const std::string &text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> tokens;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos) throw DataError("vocabulary line without a tab: " + line);
    const int id = std::stoi(line.substr(tab + 1));
    if (id != static_cast<int>(tokens.size())) {
      throw DataError("vocabulary ids must be dense and ordered");
    }
    tokens.push_back(line.substr(0, tab));
  }
  if (tokens.size() < 2 || tokens[kPad] != "<pad>" || tokens[kUnk] != "<unk>") {
    throw DataError("vocabulary must start with the reserved <pad> and <unk> entries");
  }
  return FromTokens({tokens.begin() + 2, tokens.end()});
}

std::vector<int> DocumentTokenIds(const Document &doc, const Vocabulary &vocab) {
  std::vector<int> ids;
  ids.reserve(doc.NumTokens());
  for (const auto &s : doc.sentences) {
    for (const auto &t : s) ids.push_back(vocab.Id(t));
  }
  return ids;
}

uint64_t ParamSeed(uint64_t seed, const std::string &name) {
  return Fnv1a64(name) ^ (seed * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL);
}

EncoderParams EncoderParams::Register(ParamRegistry &registry, size_t vocab_size,
                                      const EncoderConfig &config, uint64_t seed) {
  if (config.dim < 1 || config.max_len < 1) throw ArgumentError("encoder dims must be >= 1");
  const size_t d = config.dim;
  auto add_gauss = [&](const std::string &name, size_t rows, size_t cols) {
    return registry.Add(name, GaussianInit(rows, cols, 0.1, ParamSeed(seed, name))).index;
  };
  EncoderParams p;
  p.token_embedding = add_gauss("encoder.token_embedding", vocab_size, d);
  p.position_embedding = add_gauss("encoder.position_embedding", config.max_len, d);
  p.mix_weight = registry.Add("encoder.mix.weight",
                              OrthogonalInit(3 * d, d, ParamSeed(seed, "encoder.mix.weight")))
                     .index;
  p.mix_bias = registry.Add("encoder.mix.bias", Tensor(1, d)).index;
  return p;
}

Var Encode(Graph &graph, const ParamRegistry &registry, const EncoderParams &params,
           const EncoderConfig &config, const std::vector<int> &token_ids,
           const std::string &title) {
  const size_t k = token_ids.size();
  if (k > static_cast<size_t>(config.max_len)) {
    throw DataError("document '" + title + "' has " + std::to_string(k) +
                    " tokens, more than max_len " + std::to_string(config.max_len));
  }
  if (k == 0) throw DataError("document '" + title + "' has no tokens");
  std::vector<int> positions(k), prev(k), next(k);
  for (size_t j = 0; j < k; ++j) {
    positions[j] = static_cast<int>(j);
    prev[j] = static_cast<int>(j) - 1;
    next[j] = j + 1 < k ? static_cast<int>(j + 1) : -1;
  }
  Var tok = graph.GatherRows(graph.Param(registry.at(params.token_embedding)), token_ids);
  Var pos = graph.GatherRows(graph.Param(registry.at(params.position_embedding)), positions);
  Var u = graph.Add(tok, pos);
  Var window = graph.ConcatCols({graph.GatherRows(u, prev), u, graph.GatherRows(u, next)});
  Var mixed = graph.MatMul(window, graph.Param(registry.at(params.mix_weight)));
  return graph.Tanh(graph.AddRow(mixed, graph.Param(registry.at(params.mix_bias))));
}

}  // namespace docre
