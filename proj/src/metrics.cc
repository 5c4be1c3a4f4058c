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

#include "docre/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "docre/errors.h"
#include "json.hpp"

namespace docre {

using json = nlohmann::json;

double Counts::precision() const {
  return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double Counts::recall() const {
  return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double Counts::f1() const {
  const double p = precision(), r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

std::string PredictionSet::ToNdjson(const Corpus &corpus) const {
  std::string out;
  for (const ScoredTriple &s : triples) {
    json j = {{"title", corpus.documents.at(s.triple.doc).title},
              {"h_idx", s.triple.head},
              {"t_idx", s.triple.tail},
              {"r", corpus.schema.name(s.triple.relation)},
              {"score", s.score}};
    out += j.dump() + "\n";
  }
  return out;
}

std::string Metrics::ToText() const {
  auto line = [](const char *name, const Counts &c) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-8s P %.4f  R %.4f  F1 %.4f  (tp %zu fp %zu fn %zu)\n",
                  name, c.precision(), c.recall(), c.f1(), c.tp, c.fp, c.fn);
    return std::string(buf);
  };
  std::string out = line("all", all);
  if (has_ign) out += line("ign", ign);
  out += line("intra", intra);
  out += line("inter", inter);
  return out;
}

std::string Metrics::ToJson() const {
  auto block = [](const Counts &c) {
    return json{{"precision", c.precision()}, {"recall", c.recall()}, {"f1", c.f1()},
                {"tp", c.tp},                 {"fp", c.fp},           {"fn", c.fn}};
  };
  json j = {{"all", block(all)}, {"intra", block(intra)}, {"inter", block(inter)}};
  if (has_ign) j["ign"] = block(ign);
  return j.dump(2) + "\n";
}

FactSet CollectFacts(const Corpus &corpus) {
  FactSet facts;
  for (const Document &d : corpus.documents) {
    for (const RelationFact &f : d.facts) {
      facts.emplace(d.EntityName(f.head), d.EntityName(f.tail), f.relation);
    }
  }
  return facts;
}

namespace {

void Tally(const std::set<Triple> &gold, const std::set<Triple> &pred, Counts &c) {
  for (const Triple &t : pred) {
    if (gold.count(t)) {
      ++c.tp;
    } else {
      ++c.fp;
    }
  }
  for (const Triple &t : gold) {
    if (!pred.count(t)) ++c.fn;
  }
}

}  // namespace

Metrics ComputeMetrics(const Corpus &gold, const std::vector<Triple> &predicted,
                       const MetricsOptions &options) {
  if (options.ignore_train_facts && options.train_facts == nullptr) {
    throw ArgumentError("Ign F1 requested without a training fact set");
  }
  std::set<Triple> all_gold;
  for (size_t d = 0; d < gold.documents.size(); ++d) {
    for (const RelationFact &f : gold.documents[d].facts) {
      all_gold.insert({d, f.head, f.tail, f.relation});
    }
  }
  std::set<Triple> all_pred;
  for (const Triple &t : predicted) {
    if (t.doc >= gold.documents.size()) throw ArgumentError("prediction for unknown document");
    all_pred.insert(t);
  }

  auto intra = [&](const Triple &t) {
    return gold.documents[t.doc].ShareSentence(t.head, t.tail);
  };
  auto shared_with_train = [&](const Triple &t) {
    const Document &d = gold.documents[t.doc];
    return options.train_facts->count({d.EntityName(t.head), d.EntityName(t.tail), t.relation}) >
           0;
  };
  auto filter = [](const std::set<Triple> &in, auto keep) {
    std::set<Triple> out;
    for (const Triple &t : in) {
      if (keep(t)) out.insert(t);
    }
    return out;
  };

  Metrics m;
  Tally(all_gold, all_pred, m.all);
  Tally(filter(all_gold, intra), filter(all_pred, intra), m.intra);
  auto inter = [&](const Triple &t) { return !intra(t); };
  Tally(filter(all_gold, inter), filter(all_pred, inter), m.inter);
  if (options.ignore_train_facts) {
    m.has_ign = true;
    auto kept = [&](const Triple &t) { return !shared_with_train(t); };
    Tally(filter(all_gold, kept), filter(all_pred, kept), m.ign);
  }
  return m;
}

double TuneThreshold(const std::vector<ScoredCandidate> &candidates, size_t num_gold,
                     double step) {
  if (candidates.empty()) throw ArgumentError("threshold tuning needs scored candidates");
  if (!(step > 0.0 && step < 1.0)) throw ArgumentError("threshold grid step must lie in (0, 1)");
  std::vector<ScoredCandidate> sorted = candidates;
  std::sort(sorted.begin(), sorted.end(),
            [](const ScoredCandidate &a, const ScoredCandidate &b) { return a.score > b.score; });
  double best_t = 0.0, best_f1 = -1.0;
  size_t idx = 0, tp = 0;
  // Thresholds ascend, so walk them from the top down over descending scores.
  std::vector<double> grid;
  for (int k = 1;; ++k) {
    const double t = std::round(k * step * 1e12) / 1e12;
    if (t >= 1.0) break;
    grid.push_back(t);
  }
  std::vector<double> f1(grid.size());
  for (size_t g = grid.size(); g-- > 0;) {
    while (idx < sorted.size() && sorted[idx].score >= grid[g]) {
      if (sorted[idx].gold) ++tp;
      ++idx;
    }
    Counts c{tp, idx - tp, num_gold >= tp ? num_gold - tp : 0};
    f1[g] = c.f1();
  }
  for (size_t g = 0; g < grid.size(); ++g) {
    if (f1[g] > best_f1) {
      best_f1 = f1[g];
      best_t = grid[g];
    }
  }
  return best_t;
}

}  // namespace docre
