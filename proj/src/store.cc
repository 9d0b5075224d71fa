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

#include "salsa/store.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <set>

#include "salsa/error.h"

namespace salsa {

namespace fs = std::filesystem;
using nlohmann::json;

ValidationFailed::ValidationFailed(std::vector<Violation> violations)
    : InvalidInput([&] {
        std::string msg = "edit validation failed";
        for (const Violation &v : violations) msg += "; " + v.edit_id + ": " + v.message;
        return msg;
      }()),
      violations_(std::move(violations)) {}

std::string encode_path_component(const std::string &id) {
  std::string out;
  for (unsigned char c : id) {
    if (std::isalnum(c) || c == '.' || c == '_' || c == '-') {
      out.push_back(static_cast<char>(c));
    } else {
      char buf[4];
      std::snprintf(buf, sizeof(buf), "%%%02X", c);
      out += buf;
    }
  }
  if (out == "." || out == "..") out = "%2E" + out.substr(1);
  return out;
}

std::string decode_path_component(const std::string &name) {
  std::string out;
  for (std::size_t i = 0; i < name.size(); ++i) {
    if (name[i] == '%' && i + 2 < name.size()) {
      out.push_back(static_cast<char>(std::stoi(name.substr(i + 1, 2), nullptr, 16)));
      i += 2;
    } else {
      out.push_back(name[i]);
    }
  }
  return out;
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

int StageRank(Stage s) { return static_cast<int>(s); }

bool RecordLess(const AnnotationRecord &a, const AnnotationRecord &b) {
  return std::make_tuple(StageRank(a.stage), a.annotator, a.revision) <
         std::make_tuple(StageRank(b.stage), b.annotator, b.revision);
}

}  // namespace

Store::Store(fs::path root, const Typology &typology, Clock clock)
    : root_(std::move(root)), typology_(typology), clock_(std::move(clock)) {
  if (!clock_) clock_ = utc_now;
  if (fs::exists(root_) && !fs::is_directory(root_)) {
    throw StoreError("store path " + root_.string() + " is not a directory");
  }
  fs::create_directories(root_ / "corpora");
  fs::create_directories(root_ / "tasks");
  fs::create_directories(root_ / "records");
  Load();
}

void Store::Load() {
  std::vector<std::string> problems;
  auto note = [&](const fs::path &p, const std::string &what) {
    problems.push_back(p.string() + ": " + what);
  };

  std::vector<fs::path> files;
  for (const auto &entry : fs::directory_iterator(root_ / "corpora")) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const fs::path &p : files) {
    try {
      Corpus c = corpus_from_json(read_json_file(p),
                                  decode_path_component(p.stem().string()));
      for (std::size_t i = 0; i < c.pairs.size(); ++i) {
        if (pair_index_.count(c.pairs[i].id)) {
          note(p, "pair id '" + c.pairs[i].id + "' already defined by another corpus");
          continue;
        }
        pair_index_[c.pairs[i].id] = {c.id, i};
      }
      corpora_[c.id] = std::move(c);
    } catch (const Error &e) {
      note(p, e.what());
    }
  }

  files.clear();
  for (const auto &entry : fs::directory_iterator(root_ / "tasks")) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const fs::path &p : files) {
    try {
      WorkflowTask t = task_from_json(read_json_file(p), "");
      if (!pair_index_.count(t.pair_id)) {
        note(p, "task references unknown pair '" + t.pair_id + "'");
        continue;
      }
      for (const std::string &v : check_invariants(t)) note(p, v);
      tasks_[t.pair_id] = std::move(t);
    } catch (const Error &e) {
      note(p, e.what());
    }
  }
  for (const auto &[pair_id, where] : pair_index_) {
    if (!tasks_.count(pair_id)) {
      WorkflowTask t;
      t.pair_id = pair_id;
      tasks_[pair_id] = t;
    }
  }

  files.clear();
  for (const auto &entry : fs::recursive_directory_iterator(root_ / "records")) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const fs::path &p : files) {
    try {
      AnnotationRecord r = record_from_json(read_json_file(p), "");
      if (!pair_index_.count(r.pair_id)) {
        note(p, "record references unknown pair '" + r.pair_id + "'");
        continue;
      }
      records_[r.pair_id].push_back(std::move(r));
    } catch (const Error &e) {
      note(p, e.what());
    }
  }
  for (auto &[pair_id, list] : records_) std::sort(list.begin(), list.end(), RecordLess);

  if (!problems.empty()) {
    std::string msg = "store " + root_.string() + " is corrupt (" +
                      std::to_string(problems.size()) + " problem(s)):";
    for (const std::string &p : problems) msg += "\n  " + p;
    throw StoreError(msg);
  }
  for (const auto &[pair_id, task] : tasks_) task_mu_[pair_id] = std::make_unique<std::mutex>();
}

void Store::PersistTask(const WorkflowTask &task) const {
  write_json_file(root_ / "tasks" / (encode_path_component(task.pair_id) + ".json"),
                  task_to_json(task));
}

void Store::PersistRecord(const AnnotationRecord &record) const {
  const fs::path path = root_ / "records" / encode_path_component(record.pair_id) /
                        std::string(to_string(record.stage)) /
                        encode_path_component(record.annotator) /
                        (std::to_string(record.revision) + ".json");
  if (fs::exists(path)) throw ConflictError("record " + path.string() + " already exists");
  write_json_file(path, record_to_json(record));
}

std::mutex &Store::TaskMutex(const std::string &pair_id) const {
  std::shared_lock lock(mu_);
  auto it = task_mu_.find(pair_id);
  if (it == task_mu_.end()) throw NotFound("no task for pair '" + pair_id + "'");
  return *it->second;
}

std::string Store::import_corpus(const Corpus &corpus) {
  if (corpus.id.empty()) throw InvalidInput("corpus id must not be empty");
  std::unique_lock lock(mu_);
  if (corpora_.count(corpus.id)) throw InvalidInput("corpus '" + corpus.id + "' already exists");
  for (const SentencePair &p : corpus.pairs) {
    if (pair_index_.count(p.id)) {
      throw InvalidInput("pair id '" + p.id + "' already exists in corpus '" +
                         pair_index_[p.id].first + "'");
    }
  }
  write_json_file(root_ / "corpora" / (encode_path_component(corpus.id) + ".json"),
                  corpus_to_json(corpus));
  for (std::size_t i = 0; i < corpus.pairs.size(); ++i) {
    const std::string &id = corpus.pairs[i].id;
    pair_index_[id] = {corpus.id, i};
    WorkflowTask t;
    t.pair_id = id;
    PersistTask(t);
    tasks_[id] = t;
    task_mu_[id] = std::make_unique<std::mutex>();
  }
  corpora_[corpus.id] = corpus;
  return corpus.id;
}

void Store::import_records(const std::vector<AnnotationRecord> &records) {
  std::unique_lock lock(mu_);
  std::set<std::tuple<std::string, std::string, int, std::int64_t>> batch;
  for (const AnnotationRecord &r : records) {
    if (!pair_index_.count(r.pair_id)) {
      throw InvalidInput("record by '" + r.annotator + "' references unknown pair '" + r.pair_id + "'");
    }
    auto key = std::make_tuple(r.pair_id, r.annotator, StageRank(r.stage), r.revision);
    bool clash = !batch.insert(key).second;
    for (const AnnotationRecord &e : records_[r.pair_id]) {
      clash = clash || (e.annotator == r.annotator && e.stage == r.stage && e.revision == r.revision);
    }
    if (clash) {
      throw ConflictError("duplicate record (" + r.annotator + ", " + r.pair_id + ", " +
                          std::string(to_string(r.stage)) + ", revision " +
                          std::to_string(r.revision) + ")");
    }
  }
  for (const AnnotationRecord &r : records) {
    PersistRecord(r);
    auto &list = records_[r.pair_id];
    list.push_back(r);
    std::sort(list.begin(), list.end(), RecordLess);
  }
}

std::string Store::import_document(const json &doc, const std::string &default_corpus_id) {
  if (doc.is_array() || (doc.is_object() && doc.value("format", "") == "salsa-annotations")) {
    import_records(annotations_from_json(doc));
    return {};
  }
  if (doc.is_object() && doc.value("format", "") == "salsa-dataset") {
    std::string last;
    const json &corpora = doc.at("corpora");
    for (std::size_t i = 0; i < corpora.size(); ++i) {
      last = import_corpus(corpus_from_json(corpora[i], default_corpus_id));
    }
    if (auto it = doc.find("tasks"); it != doc.end()) {
      for (std::size_t i = 0; i < it->size(); ++i) {
        const std::string path = "/tasks/" + std::to_string(i);
        WorkflowTask t = task_from_json((*it)[i], path);
        auto problems = check_invariants(t);
        if (!problems.empty()) throw SchemaError(path, problems.front());
        std::unique_lock lock(mu_);
        if (!tasks_.count(t.pair_id)) throw SchemaError(path, "unknown pair '" + t.pair_id + "'");
        PersistTask(t);
        tasks_[t.pair_id] = std::move(t);
      }
    }
    if (auto it = doc.find("records"); it != doc.end()) {
      import_records(annotations_from_json(*it));
    }
    return last;
  }
  return import_corpus(corpus_from_json(doc, default_corpus_id));
}

std::vector<std::string> Store::corpus_ids() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  for (const auto &[id, c] : corpora_) out.push_back(id);
  return out;
}

Corpus Store::corpus(const std::string &id) const {
  std::shared_lock lock(mu_);
  auto it = corpora_.find(id);
  if (it == corpora_.end()) throw NotFound("no corpus '" + id + "'");
  return it->second;
}

SentencePair Store::pair(const std::string &pair_id) const {
  std::shared_lock lock(mu_);
  auto it = pair_index_.find(pair_id);
  if (it == pair_index_.end()) throw NotFound("no pair '" + pair_id + "'");
  return corpora_.at(it->second.first).pairs[it->second.second];
}

std::string Store::corpus_of(const std::string &pair_id) const {
  std::shared_lock lock(mu_);
  auto it = pair_index_.find(pair_id);
  if (it == pair_index_.end()) throw NotFound("no pair '" + pair_id + "'");
  return it->second.first;
}

WorkflowTask Store::task(const std::string &pair_id) const {
  std::shared_lock lock(mu_);
  auto it = tasks_.find(pair_id);
  if (it == tasks_.end()) throw NotFound("no task for pair '" + pair_id + "'");
  return it->second;
}

std::vector<WorkflowTask> Store::tasks() const {
  std::shared_lock lock(mu_);
  std::vector<WorkflowTask> out;
  for (const auto &[cid, c] : corpora_) {
    for (const SentencePair &p : c.pairs) out.push_back(tasks_.at(p.id));
  }
  return out;
}

std::vector<WorkflowTask> Store::pending_tasks(const std::string &annotator) const {
  std::vector<WorkflowTask> out;
  for (WorkflowTask &t : tasks()) {
    if (is_pending_for(t, annotator)) out.push_back(std::move(t));
  }
  return out;
}

WorkflowTask Store::Transition(const std::string &pair_id,
                               const std::function<WorkflowTask(WorkflowTask)> &fn) {
  std::lock_guard write(TaskMutex(pair_id));
  WorkflowTask next = fn(task(pair_id));
  PersistTask(next);
  std::unique_lock lock(mu_);
  tasks_[pair_id] = next;
  return next;
}

WorkflowTask Store::assign(const std::string &pair_id, const std::vector<std::string> &annotators) {
  return Transition(pair_id, [&](WorkflowTask t) { return assign_annotators(std::move(t), annotators); });
}

WorkflowTask Store::assign_adjudicator(const std::string &pair_id, const std::string &adjudicator) {
  return Transition(pair_id,
                    [&](WorkflowTask t) { return salsa::assign_adjudicator(std::move(t), adjudicator); });
}

WorkflowTask Store::start_classification(const std::string &pair_id) {
  return Transition(pair_id, [](WorkflowTask t) { return salsa::start_classification(std::move(t)); });
}

WorkflowTask Store::submit(AnnotationRecord record) {
  const SentencePair p = pair(record.pair_id);
  std::lock_guard write(TaskMutex(record.pair_id));
  const WorkflowTask current = task(record.pair_id);
  WorkflowTask next = salsa::submit(record, current);

  std::vector<Violation> violations;
  if (record.stage == Stage::kClassification) {
    std::vector<Edit> normalized;
    for (const Edit &e : record.edits) {
      if (!e.classification) continue;
      auto base = std::find_if(current.adjudicated_edits->begin(), current.adjudicated_edits->end(),
                               [&](const Edit &a) { return a.id == e.id; });
      Edit classified = *base;
      classified.classification = e.classification;
      if (e.information_change) classified.information_change = e.information_change;
      auto v = validate_edit(classified, p, typology_);
      violations.insert(violations.end(), v.begin(), v.end());
      normalized.push_back(std::move(classified));
    }
    record.edits = std::move(normalized);
  } else {
    violations = validate_edits(record.edits, p, typology_);
    for (const Edit &e : record.edits) {
      if (e.classification) {
        violations.push_back({e.id, "unexpected-classification",
                              std::string(to_string(record.stage)) +
                                  " records carry operations and spans only",
                              {}});
      }
    }
  }
  if (!violations.empty()) throw ValidationFailed(std::move(violations));

  if (record.submitted_at.empty()) record.submitted_at = clock_();
  PersistRecord(record);
  PersistTask(next);
  std::unique_lock lock(mu_);
  auto &list = records_[record.pair_id];
  list.push_back(std::move(record));
  std::sort(list.begin(), list.end(), RecordLess);
  tasks_[next.pair_id] = next;
  return next;
}

bool Store::Matches(const std::string &pair_id, const DatasetFilter &filter) const {
  auto it = pair_index_.find(pair_id);
  if (it == pair_index_.end()) return false;
  if (filter.corpus_id && it->second.first != *filter.corpus_id) return false;
  if (filter.system &&
      corpora_.at(it->second.first).pairs[it->second.second].system != *filter.system) {
    return false;
  }
  return true;
}

std::vector<AnnotationRecord> Store::records(const DatasetFilter &filter) const {
  std::shared_lock lock(mu_);
  std::vector<AnnotationRecord> out;
  for (const auto &[cid, c] : corpora_) {
    for (const SentencePair &p : c.pairs) {
      if (!Matches(p.id, filter)) continue;
      auto it = records_.find(p.id);
      if (it == records_.end()) continue;
      out.insert(out.end(), it->second.begin(), it->second.end());
    }
  }
  return out;
}

std::vector<AnnotationRecord> Store::records_for(const std::string &pair_id) const {
  std::shared_lock lock(mu_);
  auto it = records_.find(pair_id);
  return it == records_.end() ? std::vector<AnnotationRecord>{} : it->second;
}

std::vector<Edit> Store::aggregate_final(const std::string &pair_id) const {
  return salsa::aggregate_final(task(pair_id), records_for(pair_id), typology_);
}

json Store::export_dataset(const DatasetFilter &filter) const {
  json corpora = json::array();
  json tasks = json::array();
  json aggregated = json::array();
  std::vector<AnnotationRecord> recs = records(filter);
  {
    std::shared_lock lock(mu_);
    for (const auto &[cid, c] : corpora_) {
      if (filter.corpus_id && cid != *filter.corpus_id) continue;
      Corpus subset{cid, {}};
      for (const SentencePair &p : c.pairs) {
        if (Matches(p.id, filter)) subset.pairs.push_back(p);
      }
      if (subset.pairs.empty() && filter.system) continue;
      corpora.push_back(corpus_to_json(subset));
      for (const SentencePair &p : subset.pairs) tasks.push_back(task_to_json(tasks_.at(p.id)));
    }
  }
  for (const json &t : tasks) {
    const std::string pair_id = t.at("pair_id");
    if (t.at("state") != "complete") continue;
    json edits = json::array();
    for (const Edit &e : aggregate_final(pair_id)) edits.push_back(edit_to_json(e));
    aggregated.push_back({{"pair_id", pair_id}, {"edits", edits}});
  }
  json records_json = json::array();
  for (const AnnotationRecord &r : recs) records_json.push_back(record_to_json(r));
  return {{"format", "salsa-dataset"},
          {"version", kDatasetFormatVersion},
          {"corpora", corpora},
          {"tasks", tasks},
          {"records", records_json},
          {"aggregated", aggregated}};
}

}  // namespace salsa
