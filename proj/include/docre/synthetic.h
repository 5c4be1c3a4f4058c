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

#ifndef DOCRE_SYNTHETIC_H_
#define DOCRE_SYNTHETIC_H_

#include <cstdint>
#include <string>

#include "docre/corpus.h"

namespace docre {

struct GeneratorKnobs {
  int min_sentences = 4;
  int max_sentences = 8;
  int min_entities = 4;
  int max_entities = 9;
  // Probability that a planted fact is bridge-mediated (head and tail never
  // share a sentence). 0 and 1 are exact.
  double inter_fraction = 0.5;
  // Probability that a mention spans two tokens instead of one.
  double two_token_mentions = 0.25;
  Split split = Split::kTrain;
};

// Deterministic synthetic corpus. Relation r between entities A and B is
// planted either as one sentence "A <r> B" or as two sentences
// "A <r>-from K" and "K <r>-to B" sharing a bridge entity K, where <r> is the
// schema name of r. Leftover entities are placed in filler sentences without
// triggers; the sentence budget grows if the planted facts need it. Throws
// ArgumentError if n_docs == 0 or the schema is empty.
Corpus GenerateSynthetic(uint64_t seed, size_t n_docs, const RelationSchema &schema,
                         const GeneratorKnobs &knobs = {});

// The two-sentence reference document "Alice works at Acme ." / "Acme is
// based in Paris ." with entities Alice, Acme (in both sentences) and Paris,
// labelled with works_at(Alice, Acme), based_in(Acme, Paris) and
// located_in(Alice, Paris) under TinySchema().
Document TinyDocument();
RelationSchema TinySchema();
Corpus TinyCorpus();

// Trigger tokens used by the generator for relation `name`.
std::string IntraTrigger(const std::string &name);
std::string BridgeHeadTrigger(const std::string &name);
std::string BridgeTailTrigger(const std::string &name);

}  // namespace docre

#endif  // DOCRE_SYNTHETIC_H_
