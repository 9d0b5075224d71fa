// Copyright 2026 The SALSA Workbench Authors.
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

#include "salsa/cli.h"

#include <algorithm>
#include <atomic>
#include <csignal>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "salsa/edit.h"
#include "salsa/error.h"
#include "salsa/json_io.h"
#include "salsa/qe_export.h"
#include "salsa/reports.h"
#include "salsa/service.h"
#include "salsa/store.h"

namespace salsa::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string> kSubcommands = {"import", "serve", "score", "fit-weights", "agreement", "stats",
                                            "export-qe", "export-dataset", "validate", "assign"};

// Raised for inconsistent flag combinations detected after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string store;
  std::vector<std::string> corpus;
  std::vector<std::string> annotations;
  std::vector<std::string> files;
  std::string corpus_id;
  std::string system;
  std::string id;
  std::string typology;
  std::string weights;
  std::string out;
  std::string format = "json";
  std::string view = "individual";
  std::string bind = "127.0.0.1:8080";
  std::string gold_key = "gold_score";
  std::vector<std::string> fix;
  bool fix_unobserved = false;
  std::vector<std::string> classes;
  bool expand_composites = false;
  std::string stage = "selection";
  std::string edges = "0,10,20,30,40";
  bool edit_distance = false;
  bool include_complex = false;
  std::string pair;
  std::vector<std::string> annotators;
  std::string adjudicator;
  bool start_classification = false;
};

struct Source {
  std::vector<SentencePair> pairs;
  std::vector<AnnotationRecord> records;
  std::map<std::string, WorkflowTask> tasks;
};

bool IsDataset(const json &doc) { return doc.is_object() && doc.value("format", "") == "salsa-dataset"; }

std::string StemId(const std::string &file) { return fs::path(file).stem().string(); }

void Emit(const std::string &text, const Options &o, std::ostream &out) {
  if (o.out.empty() || o.out == "-") {
    out << text;
  } else {
    write_text_file_atomic(o.out, text);
  }
}

Source LoadSource(const Options &o, const Typology &typology) {
  Source src;
  std::vector<Corpus> corpora;
  if (!o.corpus.empty()) {
    for (const std::string &file : o.corpus) {
      const json doc = read_json_file(file);
      if (IsDataset(doc)) {
        for (const json &c : doc.at("corpora")) corpora.push_back(corpus_from_json(c, StemId(file)));
        for (std::size_t i = 0; i < doc.value("tasks", json::array()).size(); ++i) {
          WorkflowTask t = task_from_json(doc["tasks"][i], "/tasks/" + std::to_string(i));
          src.tasks[t.pair_id] = std::move(t);
        }
        if (doc.contains("records")) {
          for (AnnotationRecord &r : annotations_from_json(doc["records"])) src.records.push_back(std::move(r));
        }
      } else {
        corpora.push_back(corpus_from_json(doc, StemId(file)));
      }
    }
    for (const std::string &file : o.annotations) {
      for (AnnotationRecord &r : annotations_from_json(read_json_file(file))) src.records.push_back(std::move(r));
    }
  } else if (!o.store.empty()) {
    if (!o.annotations.empty()) throw UsageError("--annotations requires --corpus");
    Store store(o.store, typology);
    for (const std::string &id : store.corpus_ids()) corpora.push_back(store.corpus(id));
    src.records = store.records();
    for (WorkflowTask &t : store.tasks()) src.tasks[t.pair_id] = std::move(t);
  } else {
    throw UsageError("no input: pass --corpus FILE or --store DIR (or set SALSA_STORE)");
  }

  std::set<std::string> seen;
  for (Corpus &c : corpora) {
    if (!o.corpus_id.empty() && c.id != o.corpus_id) continue;
    for (SentencePair &p : c.pairs) {
      if (!o.system.empty() && p.system != o.system) continue;
      if (!seen.insert(p.id).second) throw InvalidInput("pair id '" + p.id + "' appears in more than one corpus");
      src.pairs.push_back(std::move(p));
    }
  }
  if (!o.corpus_id.empty() || !o.system.empty()) {
    std::erase_if(src.records, [&](const AnnotationRecord &r) { return !seen.count(r.pair_id); });
  }
  return src;
}

WeightScheme LoadWeights(const Options &o, std::ostream &err) {
  if (o.weights.empty()) return WeightScheme::Default();
  WeightScheme w = WeightScheme::FromJson(read_json_file(o.weights));
  for (const std::string &warning : w.sign_warnings()) err << "warning: " << warning << '\n';
  return w;
}

void Warn(const ClassifiedData &data, std::ostream &err) {
  for (const std::string &w : data.warnings) err << "warning: " << w << '\n';
  if (data.partial()) err << "warning: " << data.missing.size() << " pair(s) without usable classifications\n";
}

std::size_t KeyIndex(const std::string &name) {
  for (std::size_t k = 0; k < WeightScheme::kNumKeys; ++k) {
    if (WeightScheme::key_name(k) == name) return k;
  }
  throw UsageError("unknown weight key '" + name + "' (expected family/polarity, e.g. syntactic/error)");
}

std::vector<std::size_t> ParseEdges(const std::string &text) {
  std::vector<std::size_t> edges;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      edges.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception &) {
      throw UsageError("bad --edges entry '" + item + "'");
    }
  }
  return edges;
}

int CmdImport(const Options &o, const Typology &typology, std::ostream &out) {
  if (o.store.empty()) throw UsageError("import requires --store (or SALSA_STORE)");
  std::vector<std::string> files = o.files;
  files.insert(files.end(), o.corpus.begin(), o.corpus.end());
  files.insert(files.end(), o.annotations.begin(), o.annotations.end());
  if (files.empty()) throw UsageError("import requires at least one file");
  Store store(o.store, typology);
  json imported = json::array();
  for (const std::string &file : files) {
    const json doc = read_json_file(file);
    const std::string id = store.import_document(doc, o.id.empty() ? StemId(file) : o.id);
    imported.push_back({{"file", file}, {"corpus", id.empty() ? json(nullptr) : json(id)}});
  }
  Emit(dump_stable({{"imported", imported}}), o, out);
  return kExitOk;
}

int CmdAssign(const Options &o, const Typology &typology, std::ostream &out) {
  if (o.store.empty()) throw UsageError("assign requires --store (or SALSA_STORE)");
  const int actions = !o.annotators.empty() + !o.adjudicator.empty() + o.start_classification;
  if (actions != 1) throw UsageError("pass exactly one of --annotators, --adjudicator, --start-classification");
  Store store(o.store, typology);
  WorkflowTask t;
  if (!o.annotators.empty()) t = store.assign(o.pair, o.annotators);
  else if (!o.adjudicator.empty()) t = store.assign_adjudicator(o.pair, o.adjudicator);
  else t = store.start_classification(o.pair);
  Emit(dump_stable({{"task", task_to_json(t)}}), o, out);
  return kExitOk;
}

std::atomic<bool> g_stop_requested{false};

extern "C" void HandleStopSignal(int) { g_stop_requested = true; }

int CmdServe(const Options &o, const Typology &typology, std::ostream &err) {
  if (o.store.empty()) throw UsageError("serve requires --store (or SALSA_STORE)");
  const auto colon = o.bind.rfind(':');
  if (colon == std::string::npos) throw UsageError("--bind expects HOST:PORT");
  const std::string host = o.bind.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(o.bind.substr(colon + 1));
  } catch (const std::exception &) {
    throw UsageError("--bind expects HOST:PORT");
  }
  Store store(o.store, typology);
  Service service(store, LoadWeights(o, err));
  const int bound = service.bind(host, port);
  err << "listening on " << host << ':' << bound << std::endl;

  g_stop_requested = false;
  auto previous_int = std::signal(SIGINT, HandleStopSignal);
  auto previous_term = std::signal(SIGTERM, HandleStopSignal);
  std::atomic<bool> done{false};
  std::thread watcher([&] {
    while (!done) {
      if (g_stop_requested) {
        service.stop();
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
  });
  service.listen();
  done = true;
  watcher.join();
  std::signal(SIGINT, previous_int);
  std::signal(SIGTERM, previous_term);
  err << "stopped" << std::endl;
  return kExitOk;
}

int CmdScore(const Options &o, const Typology &typology, std::ostream &out, std::ostream &err) {
  const Source src = LoadSource(o, typology);
  const WeightScheme weights = LoadWeights(o, err);
  const View view = parse_view(o.view);
  const ClassifiedData data = classified_view(src.pairs, src.records, view, typology, src.tasks);
  Warn(data, err);
  if (o.format == "tsv") {
    Emit(scores_tsv(data, weights, typology), o, out);
  } else {
    Emit(dump_stable(scores_json(data, view, weights, typology)), o, out);
  }
  return kExitOk;
}

int CmdFitWeights(const Options &o, const Typology &typology, std::ostream &out, std::ostream &err) {
  const Source src = LoadSource(o, typology);
  const ClassifiedData data = classified_view(src.pairs, src.records, parse_view(o.view), typology, src.tasks);
  Warn(data, err);

  std::vector<FitSample> samples;
  std::size_t without_gold = 0;
  for (const AnnotatedPair &a : data.data) {
    const json &meta = a.pair.metadata;
    if (!meta.is_object() || !meta.contains(o.gold_key) || !meta[o.gold_key].is_number()) {
      ++without_gold;
      continue;
    }
    samples.push_back({a.pair, a.edits, meta[o.gold_key].get<double>()});
  }
  if (without_gold > 0) {
    err << "warning: " << without_gold << " annotation(s) lack a numeric metadata field '" << o.gold_key << "'\n";
  }

  FitOptions options;
  for (const std::string &spec : o.fix) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw UsageError("--fix expects KEY=VALUE, got '" + spec + "'");
    try {
      options.fixed[KeyIndex(spec.substr(0, eq))] = std::stod(spec.substr(eq + 1));
    } catch (const std::invalid_argument &) {
      throw UsageError("--fix value is not a number: '" + spec + "'");
    }
  }
  if (o.fix_unobserved) {
    std::array<std::size_t, WeightScheme::kNumKeys> counts{};
    for (const FitSample &s : samples) {
      const FeatureRow row = score_features(s.pair, s.edits, typology);
      for (std::size_t k = 0; k < row.size(); ++k) counts[k] += row[k] != 0.0;
    }
    const WeightScheme defaults = WeightScheme::Default();
    for (std::size_t k = 0; k < counts.size(); ++k) {
      if (counts[k] == 0 && !options.fixed.count(k)) options.fixed[k] = defaults.values()[k];
    }
  }

  const FitResult fit = fit_weights(samples, typology, options);
  json counts = json::object();
  json errors = json::object();
  for (std::size_t k = 0; k < WeightScheme::kNumKeys; ++k) {
    counts[WeightScheme::key_name(k)] = fit.diagnostics.feature_counts[k];
    errors[WeightScheme::key_name(k)] = fit.diagnostics.standard_errors[k];
  }
  json fixed = json::array();
  for (const auto &[k, v] : options.fixed) fixed.push_back(WeightScheme::key_name(k));
  const json report = {{"weights", fit.weights.ToJson()},
                       {"diagnostics",
                        {{"r_squared", fit.diagnostics.r_squared},
                         {"residual_norm", fit.diagnostics.residual_norm},
                         {"sentences", fit.diagnostics.sentences},
                         {"feature_counts", counts},
                         {"standard_errors", errors},
                         {"fixed", fixed},
                         {"warnings", fit.diagnostics.warnings}}}};
  for (const std::string &w : fit.diagnostics.warnings) err << "warning: " << w << '\n';
  if (!o.out.empty() && o.out != "-") {
    write_text_file_atomic(o.out, dump_stable(fit.weights.ToJson()));
  }
  out << dump_stable(report);
  return kExitOk;
}

int CmdAgreement(const Options &o, const Typology &typology, std::ostream &out) {
  const Source src = LoadSource(o, typology);
  AgreementOptions options;
  options.expand_composites = o.expand_composites;
  options.stage = parse_stage(o.stage);
  if (!o.classes.empty()) {
    options.classes.clear();
    for (const std::string &c : o.classes) options.classes.push_back(EditClass::Parse(c));
  }
  const json report = agreement_json(src.pairs, src.records, typology, options);
  Emit(o.format == "tsv" ? agreement_tsv(stable_reals(report)) : dump_stable(report), o, out);
  return kExitOk;
}

int CmdStats(const Options &o, const Typology &typology, std::ostream &out, std::ostream &err) {
  const std::vector<std::size_t> edges = ParseEdges(o.edges);
  const Source src = LoadSource(o, typology);
  const ClassifiedData data = classified_view(src.pairs, src.records, parse_view(o.view), typology, src.tasks);
  Warn(data, err);
  const json report = stats_json(data, LoadWeights(o, err), typology, edges, o.edit_distance);
  Emit(o.format == "tsv" ? stats_tsv(stable_reals(report)) : dump_stable(report), o, out);
  return kExitOk;
}

int CmdExportQe(const Options &o, const Typology &typology, std::ostream &out, std::ostream &err) {
  const Source src = LoadSource(o, typology);
  const ClassifiedData data = classified_view(src.pairs, src.records, parse_view(o.view), typology, src.tasks);
  Warn(data, err);
  Emit(export_qe_jsonl(data.data, LoadWeights(o, err), typology, o.include_complex), o, out);
  return kExitOk;
}

int CmdExportDataset(const Options &o, const Typology &typology, std::ostream &out) {
  if (o.store.empty()) throw UsageError("export-dataset requires --store (or SALSA_STORE)");
  Store store(o.store, typology);
  DatasetFilter filter;
  if (!o.corpus_id.empty()) filter.corpus_id = o.corpus_id;
  if (!o.system.empty()) filter.system = o.system;
  Emit(dump_stable(store.export_dataset(filter)), o, out);
  return kExitOk;
}

int CmdValidate(const Options &o, std::ostream &out) {
  json errors = json::array();
  json violations = json::array();
  auto fail = [&](const std::string &file, const std::exception &e) {
    json item = {{"file", file}, {"message", e.what()}};
    if (const auto *s = dynamic_cast<const SchemaError *>(&e)) item["path"] = s->path();
    errors.push_back(item);
  };

  std::optional<Typology> custom;
  if (!o.typology.empty()) {
    try {
      custom = Typology::Load(o.typology);
    } catch (const std::exception &e) {
      fail(o.typology, e);
    }
  }
  const Typology &typology = custom ? *custom : Typology::Default();

  if (!o.weights.empty()) {
    try {
      WeightScheme::FromJson(read_json_file(o.weights));
    } catch (const std::exception &e) {
      fail(o.weights, e);
    }
  }

  std::map<std::string, SentencePair> pairs;
  std::vector<AnnotationRecord> records;
  std::map<std::string, WorkflowTask> tasks;
  std::size_t inputs = 0;
  if (!o.store.empty() && o.corpus.empty()) {
    ++inputs;
    try {
      Source src = LoadSource(o, typology);
      for (SentencePair &p : src.pairs) pairs[p.id] = std::move(p);
      records = std::move(src.records);
      tasks = std::move(src.tasks);
    } catch (const std::exception &e) {
      fail(o.store, e);
    }
  }
  for (const std::string &file : o.corpus) {
    ++inputs;
    try {
      Options single = o;
      single.corpus = {file};
      single.annotations.clear();
      Source src = LoadSource(single, typology);
      for (SentencePair &p : src.pairs) {
        if (pairs.count(p.id)) throw InvalidInput("pair id '" + p.id + "' appears in more than one corpus");
        pairs[p.id] = std::move(p);
      }
      records.insert(records.end(), src.records.begin(), src.records.end());
      tasks.insert(src.tasks.begin(), src.tasks.end());
    } catch (const std::exception &e) {
      fail(file, e);
    }
  }
  for (const std::string &file : o.annotations) {
    ++inputs;
    try {
      for (AnnotationRecord &r : annotations_from_json(read_json_file(file))) records.push_back(std::move(r));
    } catch (const std::exception &e) {
      fail(file, e);
    }
  }
  if (inputs == 0 && o.typology.empty() && o.weights.empty()) {
    throw UsageError("nothing to validate: pass --corpus, --annotations, --store, --typology or --weights");
  }

  std::set<std::tuple<std::string, std::string, std::string, std::int64_t>> keys;
  for (const AnnotationRecord &r : records) {
    const json where = {{"pair_id", r.pair_id}, {"annotator", r.annotator}, {"stage", to_string(r.stage)},
                        {"revision", r.revision}};
    auto report = [&](const std::string &edit_id, const std::string &code, const std::string &message) {
      json v = where;
      v["edit_id"] = edit_id;
      v["code"] = code;
      v["message"] = message;
      violations.push_back(v);
    };
    if (!keys.insert({r.pair_id, r.annotator, std::string(to_string(r.stage)), r.revision}).second) {
      report("", "duplicate-record", "record repeats (annotator, pair, stage, revision)");
    }
    auto p = pairs.find(r.pair_id);
    if (p == pairs.end()) {
      report("", "unknown-pair", "record references unknown pair '" + r.pair_id + "'");
      continue;
    }
    for (const Violation &v : validate_edits(r.edits, p->second, typology)) {
      json item = where;
      item["edit_id"] = v.edit_id;
      item["code"] = v.code;
      item["message"] = v.message;
      if (v.span) item["span"] = span_to_json(*v.span);
      violations.push_back(item);
    }
    if (r.stage != Stage::kClassification) {
      for (const Edit &e : r.edits) {
        if (e.classification) {
          report(e.id, "unexpected-classification", "selection and adjudication records carry operations and spans only");
        }
      }
    }
  }
  for (const auto &[pair_id, task] : tasks) {
    for (const std::string &problem : check_invariants(task)) {
      violations.push_back({{"pair_id", pair_id}, {"code", "task-invariant"}, {"message", problem}});
    }
  }

  const bool valid = errors.empty() && violations.empty();
  Emit(dump_stable({{"valid", valid},
                    {"pairs", pairs.size()},
                    {"records", records.size()},
                    {"errors", errors},
                    {"violations", violations}}),
       o, out);
  return valid ? kExitOk : kExitInvalid;
}

void AddSource(CLI::App *sub, Options &o) {
  sub->add_option("--corpus", o.corpus, "Corpus or dataset JSON file (repeatable)");
  sub->add_option("--annotations", o.annotations, "Annotation records JSON file (repeatable)");
  sub->add_option("--store", o.store, "Store directory, used when no --corpus is given")->envname("SALSA_STORE");
  sub->add_option("--corpus-id", o.corpus_id, "Restrict to one corpus");
  sub->add_option("--system", o.system, "Restrict to one system label");
}

void AddOut(CLI::App *sub, Options &o) { sub->add_option("--out", o.out, "Output file (default stdout)"); }

void AddView(CLI::App *sub, Options &o) {
  sub->add_option("--view", o.view, "individual or aggregated")
      ->check(CLI::IsMember({"individual", "aggregated"}));
}

void AddFormat(CLI::App *sub, Options &o) {
  sub->add_option("--format", o.format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));
}

}  // namespace

std::vector<std::string> merge_config(const std::vector<std::string> &args) {
  std::vector<std::string> rest;
  std::string config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config requires a file");
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config.empty()) return rest;

  const json doc = read_json_file(config);
  if (!doc.is_object()) throw SchemaError("", "config file must hold a JSON object");
  std::string subcommand;
  for (const std::string &a : rest) {
    if (kSubcommands.count(a)) {
      subcommand = a;
      break;
    }
  }
  auto present = [&](const std::string &flag) {
    return std::any_of(rest.begin(), rest.end(),
                       [&](const std::string &a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
  };
  std::vector<std::string> extra;
  auto apply = [&](const json &object) {
    for (auto it = object.begin(); it != object.end(); ++it) {
      if (kSubcommands.count(it.key())) continue;
      const std::string flag = "--" + it.key();
      if (present(flag)) continue;
      const json &v = it.value();
      auto text = [](const json &x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
      if (v.is_boolean()) {
        if (v.get<bool>()) extra.push_back(flag);
      } else if (v.is_array()) {
        for (const json &item : v) {
          extra.push_back(flag);
          extra.push_back(text(item));
        }
      } else if (!v.is_null()) {
        extra.push_back(flag);
        extra.push_back(text(v));
      }
    }
  };
  if (!subcommand.empty() && doc.contains(subcommand)) {
    if (!doc[subcommand].is_object()) throw SchemaError("/" + subcommand, "expected an object");
    apply(doc[subcommand]);
  }
  apply(doc);
  rest.insert(rest.end(), extra.begin(), extra.end());
  return rest;
}

int run(const std::vector<std::string> &raw_args, std::ostream &out, std::ostream &err) {
  Options o;
  CLI::App app{"Edit-based evaluation workbench for text simplification", "salsa"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  app.add_option("--typology", o.typology, "Typology catalog JSON (default: built-in)");
  app.footer("Global: --config FILE merges JSON settings into the flags. Exit codes: 0 ok, 1 invalid input, 2 usage.");

  CLI::App *import = app.add_subcommand("import", "Import corpus, dataset or annotation files into a store");
  import->add_option("files", o.files, "Files to import");
  import->add_option("--store", o.store, "Store directory")->envname("SALSA_STORE");
  import->add_option("--corpus", o.corpus, "Corpus or dataset file (repeatable)");
  import->add_option("--annotations", o.annotations, "Annotation file (repeatable)");
  import->add_option("--id", o.id, "Corpus id when the document has none (default: file stem)");
  AddOut(import, o);

  CLI::App *assign = app.add_subcommand("assign", "Assign annotators, an adjudicator, or start classification");
  assign->add_option("--store", o.store, "Store directory")->envname("SALSA_STORE");
  assign->add_option("--pair", o.pair, "Pair id")->required();
  assign->add_option("--annotators", o.annotators, "Three selection annotators")->delimiter(',');
  assign->add_option("--adjudicator", o.adjudicator, "Adjudicator (not one of the annotators)");
  assign->add_flag("--start-classification", o.start_classification, "Move to the classification stage");
  AddOut(assign, o);

  CLI::App *serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--store", o.store, "Store directory")->envname("SALSA_STORE");
  serve->add_option("--bind", o.bind, "HOST:PORT (port 0 picks a free port)");
  serve->add_option("--weights", o.weights, "Weight scheme JSON for score reports");

  CLI::App *score = app.add_subcommand("score", "Per-sentence scores and sub-scores");
  AddSource(score, o);
  score->add_option("--weights", o.weights, "Weight scheme JSON (default weights otherwise)");
  AddView(score, o);
  AddFormat(score, o);
  AddOut(score, o);

  CLI::App *fit = app.add_subcommand("fit-weights", "Fit the weight scheme to gold sentence ratings");
  AddSource(fit, o);
  AddView(fit, o);
  fit->add_option("--gold-key", o.gold_key, "Pair metadata field holding the gold rating");
  fit->add_option("--fix", o.fix, "Hold a key fixed, e.g. syntactic/error=-5 (repeatable)");
  fit->add_flag("--fix-unobserved", o.fix_unobserved, "Hold keys absent from the data at their defaults");
  fit->add_option("--out", o.out, "Write the fitted weight file here");

  CLI::App *agreement = app.add_subcommand("agreement", "Token-level inter-annotator agreement");
  AddSource(agreement, o);
  agreement->add_option("--class", o.classes, "Edit class, e.g. deletion or substitution:same (repeatable)");
  agreement->add_flag("--expand-composites", o.expand_composites, "Label composite edits by their constituents");
  agreement->add_option("--stage", o.stage, "Record stage to compare")
      ->check(CLI::IsMember({"selection", "adjudication", "classification"}));
  AddFormat(agreement, o);
  AddOut(agreement, o);

  CLI::App *stats = app.add_subcommand("stats", "Corpus and per-system statistics");
  AddSource(stats, o);
  AddView(stats, o);
  stats->add_option("--weights", o.weights, "Weight scheme JSON");
  stats->add_option("--edges", o.edges, "Length bucket edges in tokens, comma separated");
  stats->add_flag("--edit-distance", o.edit_distance, "Add mean character edit distance per system");
  AddFormat(stats, o);
  AddOut(stats, o);

  CLI::App *qe = app.add_subcommand("export-qe", "Word-level quality estimation export (JSON Lines)");
  AddSource(qe, o);
  AddView(qe, o);
  qe->add_option("--weights", o.weights, "Weight scheme JSON for sentence scores");
  qe->add_flag("--include-complex", o.include_complex, "Also export complex-side tokens");
  AddOut(qe, o);

  CLI::App *dataset = app.add_subcommand("export-dataset", "Export corpora, tasks and records from a store");
  dataset->add_option("--store", o.store, "Store directory")->envname("SALSA_STORE");
  dataset->add_option("--corpus-id", o.corpus_id, "Restrict to one corpus");
  dataset->add_option("--system", o.system, "Restrict to one system label");
  AddOut(dataset, o);

  CLI::App *validate = app.add_subcommand("validate", "Check documents against the schema and edit rules");
  AddSource(validate, o);
  validate->add_option("--weights", o.weights, "Weight scheme JSON to check");
  AddOut(validate, o);

  try {
    std::vector<std::string> args = merge_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  } catch (const UsageError &e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    std::optional<Typology> custom;
    if (!o.typology.empty() && !validate->parsed()) custom = Typology::Load(o.typology);
    const Typology &typology = custom ? *custom : Typology::Default();

    if (import->parsed()) return CmdImport(o, typology, out);
    if (assign->parsed()) return CmdAssign(o, typology, out);
    if (serve->parsed()) return CmdServe(o, typology, err);
    if (score->parsed()) return CmdScore(o, typology, out, err);
    if (fit->parsed()) return CmdFitWeights(o, typology, out, err);
    if (agreement->parsed()) return CmdAgreement(o, typology, out);
    if (stats->parsed()) return CmdStats(o, typology, out, err);
    if (qe->parsed()) return CmdExportQe(o, typology, out, err);
    if (dataset->parsed()) return CmdExportDataset(o, typology, out);
    if (validate->parsed()) return CmdValidate(o, out);
  } catch (const UsageError &e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationFailed &e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitUsage;
}

}  // namespace salsa::cli
