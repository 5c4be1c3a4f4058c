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

#ifndef DOCRE_DOCRED_H_
#define DOCRE_DOCRED_H_

#include <string>

#include "docre/corpus.h"

namespace docre {

// Reads the DocRED public release layout: a JSON array of
//   {title, sents: [[token..]..], vertexSet: [[{name, sent_id, pos: [s, e]}..]..],
//    labels: [{h, t, r, evidence}..]}
// Records without "labels" load with no facts. Mentions of one entity with
// identical spans are merged, as are repeated (h, t, r) labels.
// Throws IngestError naming the record index and field, SchemaError for
// relation names missing from `schema`.
Corpus ParseDocred(const std::string &text, const RelationSchema &schema, Split split);
Corpus LoadDocred(const std::string &path, const RelationSchema &schema, Split split);

// Writes a corpus back in the DocRED layout.
std::string SerializeDocred(const Corpus &corpus);

// Relation mapping: one "id<TAB>name" line per relation, ids dense from 0.
// A JSON object {name: id} (DocRED's rel2id.json) is accepted too.
RelationSchema ParseSchema(const std::string &text);
RelationSchema LoadSchema(const std::string &path);
std::string SerializeSchema(const RelationSchema &schema);

}  // namespace docre

#endif  // DOCRE_DOCRED_H_
