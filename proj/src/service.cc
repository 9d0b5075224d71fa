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

#include "salsa/service.h"

#include <map>
#include <set>

#include "httplib.h"
#include "salsa/edit.h"
#include "salsa/error.h"
#include "salsa/json_io.h"
#include "salsa/qe_export.h"
#include "salsa/reports.h"

namespace salsa {

using nlohmann::json;

int status_for(const std::exception &e) {
  if (dynamic_cast<const UnassignedAnnotator *>(&e)) return 403;
  if (dynamic_cast<const ConflictError *>(&e)) return 409;
  if (dynamic_cast<const WorkflowError *>(&e)) return 409;
  if (dynamic_cast<const NotFound *>(&e)) return 404;
  if (dynamic_cast<const UndefinedStatistic *>(&e) || dynamic_cast<const ScoringError *>(&e) ||
      dynamic_cast<const FitError *>(&e)) {
    return 422;
  }
  if (dynamic_cast<const InvalidInput *>(&e) || dynamic_cast<const SchemaError *>(&e) ||
      dynamic_cast<const ClassificationError *>(&e) || dynamic_cast<const json::exception *>(&e)) {
    return 400;
  }
  return 500;
}

json error_body(const std::exception &e) {
  std::string kind = "internal";
  if (dynamic_cast<const ValidationFailed *>(&e)) kind = "validation";
  else if (dynamic_cast<const UnassignedAnnotator *>(&e)) kind = "unassigned";
  else if (dynamic_cast<const ConflictError *>(&e)) kind = "conflict";
  else if (dynamic_cast<const WorkflowError *>(&e)) kind = "workflow";
  else if (dynamic_cast<const NotFound *>(&e)) kind = "not_found";
  else if (dynamic_cast<const SchemaError *>(&e)) kind = "schema";
  else if (dynamic_cast<const UndefinedStatistic *>(&e)) kind = "undefined_statistic";
  else if (dynamic_cast<const ScoringError *>(&e)) kind = "scoring";
  else if (dynamic_cast<const ClassificationError *>(&e)) kind = "classification";
  else if (dynamic_cast<const InvalidInput *>(&e)) kind = "invalid_input";
  else if (dynamic_cast<const json::exception *>(&e)) kind = "parse";

  json err = {{"status", status_for(e)}, {"kind", kind}, {"message", e.what()}};
  if (const auto *v = dynamic_cast<const ValidationFailed *>(&e)) {
    json list = json::array();
    for (const Violation &violation : v->violations()) {
      json item = {{"edit_id", violation.edit_id}, {"code", violation.code}, {"message", violation.message}};
      if (violation.span) item["span"] = span_to_json(*violation.span);
      list.push_back(item);
    }
    err["violations"] = list;
  }
  if (const auto *s = dynamic_cast<const SchemaError *>(&e)) err["path"] = s->path();
  return {{"error", err}};
}

namespace {

json TokensJson(const TokenizedSentence &s) {
  json out = json::array();
  for (const Token &t : s.tokens) out.push_back({{"start", t.start}, {"end", t.end}, {"surface", t.surface}});
  return out;
}

json PairView(const SentencePair &p) {
  json out = pair_to_json(p);
  out["complex"]["tokens"] = TokensJson(p.complex);
  out["simplified"]["tokens"] = TokensJson(p.simplified);
  return out;
}

json TaskSummary(const WorkflowTask &t, const std::string &corpus) {
  return {{"pair_id", t.pair_id}, {"corpus", corpus}, {"state", to_string(t.state)}};
}

void Reply(httplib::Response &res, int status, const json &body) {
  res.status = status;
  res.set_content(stable_reals(body).dump(), "application/json");
}

bool Flag(const httplib::Request &req, const char *name) {
  if (!req.has_param(name)) return false;
  const std::string v = req.get_param_value(name);
  return v.empty() || v == "1" || v == "true" || v == "yes";
}

std::string Annotator(const httplib::Request &req) {
  std::string who = req.get_header_value("X-Annotator");
  if (who.empty() && req.has_param("annotator")) who = req.get_param_value("annotator");
  return who;
}

}  // namespace

struct Service::Impl {
  Store &store;
  WeightScheme weights;
  httplib::Server server;
  bool bound = false;

  Impl(Store &s, WeightScheme w) : store(s), weights(std::move(w)) { Routes(); }

  using Handler = std::function<void(const httplib::Request &, httplib::Response &)>;

  static httplib::Server::Handler Guard(Handler fn) {
    return [fn = std::move(fn)](const httplib::Request &req, httplib::Response &res) {
      try {
        fn(req, res);
      } catch (const std::exception &e) {
        Reply(res, status_for(e), error_body(e));
      }
    };
  }

  std::vector<SentencePair> Pairs(const std::optional<std::string> &corpus_id) const {
    std::vector<SentencePair> out;
    for (const std::string &id : store.corpus_ids()) {
      if (corpus_id && id != *corpus_id) continue;
      for (SentencePair &p : store.corpus(id).pairs) out.push_back(std::move(p));
    }
    if (corpus_id && out.empty()) store.corpus(*corpus_id);  // NotFound for unknown ids
    return out;
  }

  static std::optional<std::string> Param(const httplib::Request &req, const char *name) {
    if (!req.has_param(name)) return std::nullopt;
    return req.get_param_value(name);
  }

  std::map<std::string, WorkflowTask> TaskMap() const {
    std::map<std::string, WorkflowTask> out;
    for (WorkflowTask &t : store.tasks()) out[t.pair_id] = std::move(t);
    return out;
  }

  ClassifiedData Classified(const httplib::Request &req, View view) const {
    DatasetFilter filter{Param(req, "corpus"), Param(req, "system")};
    std::vector<SentencePair> pairs;
    for (SentencePair &p : Pairs(filter.corpus_id)) {
      if (!filter.system || p.system == *filter.system) pairs.push_back(std::move(p));
    }
    return classified_view(pairs, store.records(filter), view, store.typology(), TaskMap());
  }

  json TaskView(const std::string &pair_id, const std::string &viewer) const {
    const WorkflowTask t = store.task(pair_id);
    const SentencePair p = store.pair(pair_id);
    json out = {{"task", task_to_json(t)},
                {"corpus", store.corpus_of(pair_id)},
                {"pair", PairView(p)},
                {"pending", !viewer.empty() && is_pending_for(t, viewer)}};
    json shells = json::array();
    for (const Edit &e : detect_split_candidates(p)) shells.push_back(edit_to_json(e));
    out["split_candidates"] = shells;

    const std::vector<AnnotationRecord> records = latest_records(store.records_for(pair_id));
    if (t.state == TaskState::kAdjudicating && viewer == t.adjudicator) {
      json selections = json::array();
      for (const AnnotationRecord &r : records) {
        if (r.stage == Stage::kSelection) selections.push_back(record_to_json(r));
      }
      out["selections"] = selections;
    }
    out["own_records"] = json::array();
    for (const AnnotationRecord &r : records) {
      if (r.annotator == viewer) out["own_records"].push_back(record_to_json(r));
    }
    return out;
  }

  void Submit(Stage stage, const httplib::Request &req, httplib::Response &res) {
    const std::string who = Annotator(req);
    if (who.empty()) throw InvalidInput("missing X-Annotator header");
    const json body = json::parse(req.body);
    if (!body.is_object()) throw SchemaError("", "expected an object");
    AnnotationRecord record;
    record.annotator = who;
    record.pair_id = req.matches[1];
    record.stage = stage;
    if (auto it = body.find("revision"); it != body.end()) {
      if (!it->is_number_integer()) throw SchemaError("/revision", "expected an integer");
      record.revision = it->get<std::int64_t>();
    }
    const json &edits = body.contains("edits") ? body.at("edits") : json::array();
    if (!edits.is_array()) throw SchemaError("/edits", "expected an array");
    for (std::size_t i = 0; i < edits.size(); ++i) {
      record.edits.push_back(edit_from_json(edits[i], "/edits/" + std::to_string(i)));
    }
    const WorkflowTask next = store.submit(std::move(record));
    Reply(res, 200, {{"task", task_to_json(next)}});
  }

  void Routes() {
    server.Get("/health", Guard([](const httplib::Request &, httplib::Response &res) {
                 Reply(res, 200, {{"status", "ok"}});
               }));

    server.Get("/typology", Guard([this](const httplib::Request &, httplib::Response &res) {
                 Reply(res, 200, store.typology().ToJson());
               }));

    server.Get("/corpora", Guard([this](const httplib::Request &, httplib::Response &res) {
                 json list = json::array();
                 for (const std::string &id : store.corpus_ids()) {
                   list.push_back({{"id", id}, {"pairs", store.corpus(id).pairs.size()}});
                 }
                 Reply(res, 200, {{"corpora", list}});
               }));

    server.Get(R"(/corpora/([^/]+))", Guard([this](const httplib::Request &req, httplib::Response &res) {
                 Reply(res, 200, corpus_to_json(store.corpus(req.matches[1])));
               }));

    server.Post("/corpora", Guard([this](const httplib::Request &req, httplib::Response &res) {
                  const std::string id = store.import_document(json::parse(req.body),
                                                               Param(req, "id").value_or(""));
                  Reply(res, 201, {{"id", id}});
                }));

    server.Get("/tasks", Guard([this](const httplib::Request &req, httplib::Response &res) {
                 const std::string who = Annotator(req);
                 const auto state = Param(req, "state");
                 if (state) parse_task_state(*state);
                 json list = json::array();
                 for (const WorkflowTask &t : store.tasks()) {
                   if (!who.empty() && !is_pending_for(t, who)) continue;
                   if (state && to_string(t.state) != *state) continue;
                   list.push_back(TaskSummary(t, store.corpus_of(t.pair_id)));
                 }
                 Reply(res, 200, {{"tasks", list}});
               }));

    server.Get(R"(/tasks/([^/]+))", Guard([this](const httplib::Request &req, httplib::Response &res) {
                 Reply(res, 200, TaskView(req.matches[1], Annotator(req)));
               }));

    server.Post(R"(/tasks/([^/]+)/assign)", Guard([this](const httplib::Request &req, httplib::Response &res) {
                  const json body = json::parse(req.body);
                  WorkflowTask t;
                  if (body.contains("annotators")) {
                    t = store.assign(req.matches[1], body.at("annotators").get<std::vector<std::string>>());
                  } else if (body.contains("adjudicator")) {
                    t = store.assign_adjudicator(req.matches[1], body.at("adjudicator").get<std::string>());
                  } else {
                    throw SchemaError("", "expected 'annotators' or 'adjudicator'");
                  }
                  Reply(res, 200, {{"task", task_to_json(t)}});
                }));

    server.Post(R"(/tasks/([^/]+)/start-classification)",
                Guard([this](const httplib::Request &req, httplib::Response &res) {
                  Reply(res, 200, {{"task", task_to_json(store.start_classification(req.matches[1]))}});
                }));

    for (Stage stage : {Stage::kSelection, Stage::kAdjudication, Stage::kClassification}) {
      server.Post("/tasks/([^/]+)/" + std::string(to_string(stage)),
                  Guard([this, stage](const httplib::Request &req, httplib::Response &res) {
                    Submit(stage, req, res);
                  }));
    }

    server.Get("/reports/scores", Guard([this](const httplib::Request &req, httplib::Response &res) {
                 const View view = parse_view(Param(req, "view").value_or("aggregated"));
                 Reply(res, 200, scores_json(Classified(req, view), view, weights, store.typology()));
               }));

    server.Get("/reports/agreement", Guard([this](const httplib::Request &req, httplib::Response &res) {
                 AgreementOptions options;
                 options.expand_composites = Flag(req, "expand");
                 if (auto s = Param(req, "stage")) options.stage = parse_stage(*s);
                 if (req.has_param("class")) {
                   options.classes.clear();
                   for (std::size_t i = 0; i < req.get_param_value_count("class"); ++i) {
                     options.classes.push_back(EditClass::Parse(req.get_param_value("class", i)));
                   }
                 }
                 const auto corpus = Param(req, "corpus");
                 const std::vector<SentencePair> pairs = Pairs(corpus);
                 std::set<std::string> ids;
                 for (const SentencePair &p : pairs) ids.insert(p.id);
                 json report = agreement_json(pairs, store.records(DatasetFilter{corpus, {}}), store.typology(), options);
                 std::size_t complete = 0;
                 for (const WorkflowTask &t : store.tasks()) {
                   complete += ids.count(t.pair_id) && t.state == TaskState::kComplete;
                 }
                 report["partial"] = complete < ids.size();
                 Reply(res, 200, report);
               }));

    server.Get("/export/qe", Guard([this](const httplib::Request &req, httplib::Response &res) {
                 const View view = parse_view(Param(req, "view").value_or("aggregated"));
                 const ClassifiedData data = Classified(req, view);
                 res.status = 200;
                 res.set_content(export_qe_jsonl(data.data, weights, store.typology(), Flag(req, "complex")),
                                 "application/x-ndjson");
               }));

    server.Get("/export/dataset", Guard([this](const httplib::Request &req, httplib::Response &res) {
                 res.status = 200;
                 res.set_content(dump_stable(store.export_dataset({Param(req, "corpus"), Param(req, "system")})),
                                 "application/json");
               }));

    server.set_exception_handler([](const httplib::Request &, httplib::Response &res, std::exception_ptr ep) {
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception &e) {
        Reply(res, 500, error_body(e));
      } catch (...) {
        Reply(res, 500, {{"error", {{"status", 500}, {"kind", "internal"}, {"message", "unknown failure"}}}});
      }
    });
  }
};

Service::Service(Store &store, WeightScheme weights)
    : impl_(std::make_unique<Impl>(store, std::move(weights))) {}

Service::~Service() { stop(); }

int Service::bind(const std::string &host, int port) {
  int bound = -1;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (impl_->server.bind_to_port(host, port)) {
    bound = port;
  }
  if (bound < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  impl_->bound = true;
  return bound;
}

void Service::listen() {
  if (!impl_->bound) throw Error("service is not bound");
  impl_->server.listen_after_bind();
}

void Service::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

bool Service::running() const { return impl_->server.is_running(); }

}  // namespace salsa
