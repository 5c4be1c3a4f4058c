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


// docre: command-line front end. See README.md for the command reference.

#include <omp.h>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "docre/corpus.h"
#include "docre/docred.h"
#include "docre/errors.h"
#include "docre/gradcheck.h"
#include "docre/graphs.h"
#include "docre/synthetic.h"
#include "docre/trainer.h"
#include "json.hpp"

namespace {

using json = nlohmann::json;
using namespace docre;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitVerify = 3;

constexpr double kGradTolerance = 1e-4;

// Thrown by command handlers when a verification fails.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

// Options shared by the model/training commands. Optional members override
// the config file.
struct Overrides {
  std::optional<int> d_w, d_t, d_dist, layers;
  std::optional<uint64_t> seed;
  std::optional<int> epochs, batch_size, patience;
  std::optional<double> lr, threshold;
  std::optional<size_t> max_pairs;
  std::string variant;
  bool literal_attention = false;
  bool exclude_target = false;
};

struct RunConfig {
  std::string config_path;
  int jobs = 0;
  ModelConfig model;
  TrainConfig train;
  json synth = json::object();
  bool seed_given = false;
};

void LoadConfigFile(RunConfig &rc) {
  if (rc.config_path.empty()) return;
  json j;
  try {
    j = json::parse(ReadTextFile(rc.config_path));
  } catch (const json::exception &e) {
    throw ArgumentError("config " + rc.config_path + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ArgumentError("config must be a JSON object");
  for (const auto &[key, value] : j.items()) {
    if (key == "model") {
      rc.model = ModelConfig::FromJson(value.dump());
    } else if (key == "train") {
      rc.train = TrainConfig::FromJson(value.dump());
      rc.seed_given = rc.seed_given || value.contains("seed");
    } else if (key == "synth") {
      rc.synth = value;
    } else {
      throw ArgumentError("unknown config section: " + key);
    }
  }
}

void ApplyOverrides(RunConfig &rc, const Overrides &o) {
  if (o.d_w) rc.model.d_w = *o.d_w;
  if (o.d_t) rc.model.d_t = *o.d_t;
  if (o.d_dist) rc.model.d_dist = *o.d_dist;
  if (o.layers) rc.model.layers = *o.layers;
  if (o.seed) {
    rc.model.seed = *o.seed;
    rc.train.seed = *o.seed;
    rc.seed_given = true;
  }
  if (o.epochs) rc.train.epochs = *o.epochs;
  if (o.batch_size) rc.train.batch_size = *o.batch_size;
  if (o.patience) rc.train.patience = *o.patience;
  if (o.lr) rc.train.lr = *o.lr;
  if (o.threshold) rc.train.threshold = *o.threshold;
  if (o.max_pairs) rc.train.max_pairs = *o.max_pairs;
  if (!o.variant.empty()) rc.model.flags = FindAblationVariant(o.variant).flags;
  if (o.literal_attention) rc.model.literal_attention = true;
  if (o.exclude_target) rc.model.context_includes_target = false;
  rc.train.Validate();
}

void AddModelOptions(CLI::App *cmd, Overrides &o) {
  cmd->add_option("--d-w", o.d_w, "encoder dimension");
  cmd->add_option("--d-t", o.d_t, "node-type embedding dimension");
  cmd->add_option("--d-dist", o.d_dist, "distance embedding dimension");
  cmd->add_option("--layers", o.layers, "R-GCN layers per graph");
  cmd->add_option("--variant", o.variant, "ablation variant (full, no_both, no_reasoning, ...)");
  cmd->add_flag("--literal-attention", o.literal_attention,
                "per-entity attention softmax (fusion reduces to a value projection)");
  cmd->add_flag("--exclude-target", o.exclude_target,
                "leave the target pair out of its own context pool");
}

void AddTrainOptions(CLI::App *cmd, Overrides &o) {
  cmd->add_option("--seed", o.seed, "model and training seed (required unless in config)");
  cmd->add_option("--epochs", o.epochs);
  cmd->add_option("--batch-size", o.batch_size, "documents per optimizer step");
  cmd->add_option("--lr", o.lr, "Adam learning rate");
  cmd->add_option("--patience", o.patience, "early stop after this many epochs without gain");
  cmd->add_option("--max-pairs", o.max_pairs, "cap on training pairs per document");
  cmd->add_option("--threshold", o.threshold, "decision threshold for dev F1");
}

std::string HashHex(uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Hash of everything that determines a run's outputs.
std::string RunHash(const RunConfig &rc, const json &extra = json::object()) {
  json j = {{"model", json::parse(rc.model.ToJson())},
            {"train", json::parse(rc.train.ToJson())},
            {"extra", extra}};
  return HashHex(Fnv1a64(j.dump()));
}

int FindDocument(const Corpus &corpus, const std::string &ref) {
  for (size_t i = 0; i < corpus.documents.size(); ++i) {
    if (corpus.documents[i].title == ref) return static_cast<int>(i);
  }
  try {
    size_t used = 0;
    const long idx = std::stol(ref, &used);
    if (used == ref.size() && idx >= 0 && static_cast<size_t>(idx) < corpus.documents.size()) {
      return static_cast<int>(idx);
    }
  } catch (const std::exception &) {
  }
  throw ArgumentError("no document with title or index '" + ref + "'");
}

int EntityArg(const Document &doc, int e, const char *what) {
  if (e < 0 || static_cast<size_t>(e) >= doc.entities.size()) {
    throw ArgumentError(std::string(what) + " entity " + std::to_string(e) + " out of range [0, " +
                        std::to_string(doc.entities.size()) + ")");
  }
  return e;
}

Corpus ReadCorpusChecked(const std::string &path) {
  Corpus c = ReadCorpusFile(path);
  for (const Document &d : c.documents) {
    auto v = ValidateDocument(d, &c.schema);
    if (!v.empty()) {
      throw DataError(path + ": document '" + d.title + "': " + ViolationKindName(v[0].kind) +
                      ": " + v[0].detail);
    }
  }
  return c;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Document-level relation extraction with graph aggregation and reasoning"};
  app.require_subcommand(1);
  RunConfig rc;
  app.add_option("--config", rc.config_path, "JSON config with model/train/synth sections");
  app.add_option("--jobs", rc.jobs, "cap on parallel document workers (0 = runtime default)");

  // ingest
  auto *ingest = app.add_subcommand("ingest", "convert a DocRED split into the canonical corpus");
  std::string in_path, rel_path, out_path, split_name = "train";
  ingest->add_option("--input", in_path, "DocRED JSON file")->required();
  ingest->add_option("--relations", rel_path, "relation schema (JSON map or id<TAB>name)")->required();
  ingest->add_option("--split", split_name, "train, dev or test");
  ingest->add_option("--output", out_path, "canonical corpus file")->required();

  // stats
  auto *stats = app.add_subcommand("stats", "corpus statistics");
  std::string corpus_path;
  bool as_json = false;
  stats->add_option("--corpus", corpus_path)->required();
  stats->add_flag("--json", as_json);

  // synth
  auto *synth = app.add_subcommand("synth", "generate a synthetic corpus");
  std::optional<uint64_t> synth_seed;
  std::optional<size_t> synth_docs;
  std::optional<int> synth_relations;
  std::optional<double> synth_inter;
  synth->add_option("--seed", synth_seed, "generator seed (required unless in config)");
  synth->add_option("--docs", synth_docs, "number of documents (default 20)");
  synth->add_option("--relations", synth_relations, "number of relation types (default 4)");
  synth->add_option("--inter-fraction", synth_inter, "share of bridged facts (default 0.5)");
  synth->add_option("--split", split_name);
  synth->add_option("--output", out_path)->required();

  // build-graphs
  auto *graphs = app.add_subcommand("build-graphs", "serialize both graphs of every document");
  bool no_intra = false, no_logic = false;
  graphs->add_option("--corpus", corpus_path)->required();
  graphs->add_option("--output", out_path, "JSON lines, one document per line")->required();
  graphs->add_flag("--no-intra-edges", no_intra);
  graphs->add_flag("--no-logic-edges", no_logic);

  // explain
  auto *explain = app.add_subcommand("explain", "list reasoning paths for an entity pair");
  std::string doc_ref;
  int head = -1, tail = -1;
  explain->add_option("--corpus", corpus_path, "corpus (default: built-in tiny document)");
  explain->add_option("--doc", doc_ref, "document title or index")->default_val("0");
  explain->add_option("--head", head)->required();
  explain->add_option("--tail", tail)->required();

  // train
  auto *train = app.add_subcommand("train", "train a model");
  Overrides ov;
  std::string train_path, dev_path, model_path, log_path;
  train->add_option("--train", train_path)->required();
  train->add_option("--dev", dev_path, "dev corpus for checkpoint selection");
  train->add_option("--output", model_path, "checkpoint file")->required();
  train->add_option("--log", log_path, "epoch log file");
  AddModelOptions(train, ov);
  AddTrainOptions(train, ov);

  // evaluate
  auto *evaluate = app.add_subcommand("evaluate", "metrics and predictions for a corpus");
  std::optional<double> threshold;
  std::string facts_path, tune_path, report_path, pred_path;
  double grid_step = 0.01;
  evaluate->add_option("--model", model_path)->required();
  evaluate->add_option("--corpus", corpus_path)->required();
  evaluate->add_option("--threshold", threshold, "decision threshold (default 0.5)");
  evaluate->add_option("--tune-on", tune_path, "tune the threshold on this corpus first");
  evaluate->add_option("--grid-step", grid_step, "threshold grid step for --tune-on");
  evaluate->add_option("--train-facts", facts_path, "training corpus, enables Ign F1");
  evaluate->add_option("--report", report_path, "metrics JSON output");
  evaluate->add_option("--predictions", pred_path, "prediction NDJSON output");

  // predict
  auto *predict = app.add_subcommand("predict", "predictions only");
  predict->add_option("--model", model_path)->required();
  predict->add_option("--corpus", corpus_path)->required();
  predict->add_option("--threshold", threshold);
  predict->add_option("--output", pred_path, "prediction NDJSON (default stdout)");

  // ablate
  auto *ablate = app.add_subcommand("ablate", "train and compare ablation variants");
  std::vector<std::string> variants;
  ablate->add_option("--train", train_path)->required();
  ablate->add_option("--dev", dev_path)->required();
  ablate->add_option("--variants", variants, "subset of variants (default all)")->delimiter(',');
  ablate->add_option("--output", report_path, "JSON table output");
  AddTrainOptions(ablate, ov);

  // gradcheck
  auto *gradcheck = app.add_subcommand("gradcheck", "finite-difference check of the full loss");
  double step = 1e-3;
  gradcheck->add_option("--corpus", corpus_path, "corpus (default: built-in tiny document)");
  gradcheck->add_option("--doc", doc_ref)->default_val("0");
  gradcheck->add_option("--step", step);
  AddModelOptions(gradcheck, ov);
  gradcheck->add_option("--seed", ov.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (rc.jobs < 0) throw ArgumentError("--jobs must be >= 0");
    if (rc.jobs > 0) omp_set_num_threads(rc.jobs);
    LoadConfigFile(rc);
    ApplyOverrides(rc, ov);

    if (*ingest) {
      const RelationSchema schema = LoadSchema(rel_path);
      const Corpus c = LoadDocred(in_path, schema, ParseSplit(split_name));
      WriteCorpusFile(out_path, c);
      std::printf("%s", CorpusStats(c).ToText().c_str());
    } else if (*stats) {
      const StatsReport s = CorpusStats(ReadCorpusChecked(corpus_path));
      std::printf("%s", (as_json ? s.ToJson() + "\n" : s.ToText()).c_str());
    } else if (*synth) {
      const uint64_t seed =
          synth_seed ? *synth_seed : rc.synth.contains("seed") ? rc.synth["seed"].get<uint64_t>() : 0;
      if (!synth_seed && !rc.synth.contains("seed")) {
        throw ArgumentError("synth needs a seed (--seed or synth.seed in the config)");
      }
      GeneratorKnobs knobs;
      knobs.inter_fraction = synth_inter ? *synth_inter : rc.synth.value("inter_fraction", 0.5);
      knobs.split = ParseSplit(synth->count("--split") ? split_name
                                                       : rc.synth.value("split", std::string("train")));
      const size_t docs = synth_docs ? *synth_docs : rc.synth.value("docs", size_t{20});
      const int rels = synth_relations ? *synth_relations : rc.synth.value("relations", 4);
      if (rels < 1) throw ArgumentError("--relations must be >= 1");
      const Corpus c = GenerateSynthetic(seed, docs, RelationSchema::Numbered(rels), knobs);
      WriteCorpusFile(out_path, c);
      json extra = {{"seed", seed}, {"docs", docs}, {"relations", rels},
                    {"inter_fraction", knobs.inter_fraction}};
      std::printf("%sconfig_hash %s\n", CorpusStats(c).ToText().c_str(),
                  HashHex(Fnv1a64(extra.dump())).c_str());
    } else if (*graphs) {
      const Corpus c = ReadCorpusChecked(corpus_path);
      std::string out;
      for (const Document &d : c.documents) {
        out += GraphsToJson(d, BuildDocumentGraph(d), BuildEntityGraph(d, {!no_intra, !no_logic}));
        out += "\n";
      }
      WriteTextFile(out_path, out);
    } else if (*explain) {
      const Corpus c = corpus_path.empty() ? TinyCorpus() : ReadCorpusChecked(corpus_path);
      const Document &d = c.documents[FindDocument(c, doc_ref)];
      const PairExplanation ex =
          ExplainPair(d, EntityArg(d, head, "head"), EntityArg(d, tail, "tail"));
      std::printf("%s", ex.Render(d).c_str());
    } else if (*train) {
      if (!rc.seed_given) throw ArgumentError("train needs a seed (--seed or train.seed in the config)");
      const Corpus tr = ReadCorpusChecked(train_path);
      const Corpus dv = dev_path.empty() ? Corpus{{}, tr.schema, Split::kDev}
                                         : ReadCorpusChecked(dev_path);
      TrainResult result = Train(tr, dv, rc.model, rc.train, [](const EpochLog &e) {
        std::fprintf(stderr, "epoch %d loss %.6f dev_f1 %.4f\n", e.epoch, e.train_loss, e.dev_f1);
      });
      const std::string hash = RunHash(rc);
      SaveModel(model_path, *result.model, result.vocab, tr.schema);
      if (!log_path.empty()) {
        WriteTextFile(log_path, "# config_hash " + hash + "\n" + result.LogText());
      }
      std::printf("best_epoch %d\nconfig_hash %s\n", result.best_epoch, hash.c_str());
    } else if (*evaluate || *predict) {
      const LoadedModel lm = LoadModel(model_path);
      const Corpus c = ReadCorpusChecked(corpus_path);
      if (!(c.schema == lm.schema)) throw DataError("corpus schema differs from the checkpoint's");
      double th = threshold ? *threshold : 0.5;
      if (!tune_path.empty()) {
        if (threshold) throw ArgumentError("--threshold and --tune-on are exclusive");
        const Corpus tune = ReadCorpusChecked(tune_path);
        if (!(tune.schema == lm.schema)) throw DataError("tuning corpus schema differs");
        size_t num_gold = 0;
        const auto cands = Candidates(ScoreCorpus(*lm.model, lm.vocab, tune), tune, &num_gold);
        th = TuneThreshold(cands, num_gold, grid_step);
      }
      std::optional<FactSet> facts;
      if (!facts_path.empty()) facts = CollectFacts(ReadCorpusChecked(facts_path));
      const Evaluation ev = Evaluate(*lm.model, lm.vocab, c, th, facts ? &*facts : nullptr);
      const std::string ndjson = ev.predictions.ToNdjson(c);
      const std::string hash = HashHex(lm.model->config().Hash());
      if (*predict) {
        if (pred_path.empty()) {
          std::printf("%s", ndjson.c_str());
        } else {
          WriteTextFile(pred_path, ndjson);
        }
      } else {
        if (!pred_path.empty()) WriteTextFile(pred_path, ndjson);
        if (!report_path.empty()) {
          json r = json::parse(ev.metrics.ToJson());
          r["threshold"] = th;
          r["config_hash"] = hash;
          WriteTextFile(report_path, r.dump(2) + "\n");
        }
        std::printf("threshold %.4f\n%sconfig_hash %s\n", th, ev.metrics.ToText().c_str(),
                    hash.c_str());
      }
    } else if (*ablate) {
      if (!rc.seed_given) throw ArgumentError("ablate needs a seed (--seed or train.seed in the config)");
      const Corpus tr = ReadCorpusChecked(train_path);
      const Corpus dv = ReadCorpusChecked(dev_path);
      const auto rows = RunAblation(tr, dv, rc.model, rc.train, variants);
      const std::string hash = RunHash(rc, variants);
      if (!report_path.empty()) {
        json j = {{"config_hash", hash}, {"rows", json::parse(AblationJson(rows))}};
        WriteTextFile(report_path, j.dump(2) + "\n");
      }
      std::printf("%sconfig_hash %s\n", AblationTable(rows).c_str(), hash.c_str());
    } else if (*gradcheck) {
      const Corpus c = corpus_path.empty() ? TinyCorpus() : ReadCorpusChecked(corpus_path);
      const Document &d = c.documents[FindDocument(c, doc_ref)];
      ModelConfig mc = rc.model;
      mc.n_relations = static_cast<int>(c.schema.count());
      const Vocabulary vocab = Vocabulary::Build(c, 1);
      Model model(mc, vocab.size());
      PreparedDocument prep = model.Prepare(d, vocab);
      GradCheckOptions opts;
      opts.step = step;
      const GradCheckReport r = FiniteDifferenceCheck(
          [&](Graph &g) { return model.Loss(g, prep); }, model.params(), opts);
      std::printf(
          "max_rel_error %.3e\ncoordinates %zu\nreduced_step_coordinates %zu\n"
          "kink_crossings_excluded %zu\n"
          "groups %zu/%zu\nworst %s[%zu] analytic %.10g numeric %.10g\nconfig_hash %s\n",
          r.max_rel_error, r.coordinates_checked, r.reduced_steps, r.kink_crossings, r.groups_checked.size(),
          model.params().size(), r.worst.param.c_str(), r.worst.coordinate, r.worst.analytic,
          r.worst.numeric, HashHex(mc.Hash()).c_str());
      if (!(r.max_rel_error < kGradTolerance) || r.groups_checked.size() != model.params().size()) {
        throw VerificationFailure("gradient check failed: max relative error " +
                                  std::to_string(r.max_rel_error));
      }
    }
  } catch (const VerificationFailure &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitVerify;
  } catch (const ArgumentError &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
  return kExitOk;
}
