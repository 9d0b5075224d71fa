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

#ifndef SALSA_STORE_H_
#define SALSA_STORE_H_

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "salsa/annotation.h"
#include "salsa/edit.h"
#include "salsa/error.h"
#include "salsa/json_io.h"
#include "salsa/typology.h"
#include "salsa/workflow.h"

namespace salsa {

// Submission rejected because its edits violate the edit rules.
class ValidationFailed : public InvalidInput {
 public:
  explicit ValidationFailed(std::vector<Violation> violations);
  const std::vector<Violation> &violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

struct DatasetFilter {
  std::optional<std::string> corpus_id;
  std::optional<std::string> system;
};

inline constexpr int kDatasetFormatVersion = 1;

// Directory-backed document store:
//
//   <root>/corpora/<corpus>.json
//   <root>/tasks/<pair>.json
//   <root>/records/<pair>/<stage>/<annotator>/<revision>.json
//
// Everything is loaded into memory on open. Records are append-only. Writes
// to one task are serialized; reads run concurrently.
class Store {
 public:
  using Clock = std::function<std::string()>;

  // Opens (creating if needed) the store. Throws StoreError listing every
  // unreadable or inconsistent file.
  explicit Store(std::filesystem::path root, const Typology &typology = Typology::Default(),
                 Clock clock = {});
  Store(const Store &) = delete;
  Store &operator=(const Store &) = delete;

  const std::filesystem::path &root() const { return root_; }
  const Typology &typology() const { return typology_; }

  // Adds a corpus and one unassigned task per pair. Throws InvalidInput when
  // the corpus id or any pair id already exists.
  std::string import_corpus(const Corpus &corpus);
  // Appends records without running the workflow (historical data). Records
  // must reference known pairs; an existing (annotator, pair, stage,
  // revision) is a conflict.
  void import_records(const std::vector<AnnotationRecord> &records);
  // Accepts a dataset document, a corpus document or an annotations document.
  std::string import_document(const nlohmann::json &doc, const std::string &default_corpus_id = {});

  std::vector<std::string> corpus_ids() const;
  Corpus corpus(const std::string &id) const;
  SentencePair pair(const std::string &pair_id) const;
  std::string corpus_of(const std::string &pair_id) const;

  WorkflowTask task(const std::string &pair_id) const;
  std::vector<WorkflowTask> tasks() const;
  std::vector<WorkflowTask> pending_tasks(const std::string &annotator) const;

  WorkflowTask assign(const std::string &pair_id, const std::vector<std::string> &annotators);
  WorkflowTask assign_adjudicator(const std::string &pair_id, const std::string &adjudicator);
  WorkflowTask start_classification(const std::string &pair_id);

  // Validates the record's edits (ValidationFailed), runs the workflow
  // transition and persists the record and the task.
  WorkflowTask submit(AnnotationRecord record);

  std::vector<AnnotationRecord> records(const DatasetFilter &filter = {}) const;
  std::vector<AnnotationRecord> records_for(const std::string &pair_id) const;

  // Aggregated classification for a complete task.
  std::vector<Edit> aggregate_final(const std::string &pair_id) const;

  // {format, version, corpora: [...], tasks: [...], records: [...],
  //  aggregated: [{pair_id, edits}]}
  nlohmann::json export_dataset(const DatasetFilter &filter = {}) const;

 private:
  void Load();
  void PersistTask(const WorkflowTask &task) const;
  void PersistRecord(const AnnotationRecord &record) const;
  std::mutex &TaskMutex(const std::string &pair_id) const;
  WorkflowTask Transition(const std::string &pair_id,
                          const std::function<WorkflowTask(WorkflowTask)> &fn);
  bool Matches(const std::string &pair_id, const DatasetFilter &filter) const;

  std::filesystem::path root_;
  const Typology &typology_;
  Clock clock_;

  mutable std::shared_mutex mu_;
  std::map<std::string, Corpus> corpora_;
  std::map<std::string, std::pair<std::string, std::size_t>> pair_index_;  // pair -> (corpus, idx)
  std::map<std::string, WorkflowTask> tasks_;
  std::map<std::string, std::vector<AnnotationRecord>> records_;  // by pair, sorted by stage, annotator, revision
  mutable std::map<std::string, std::unique_ptr<std::mutex>> task_mu_;
};

// Filesystem-safe rendering of an id (percent-encodes anything outside
// [A-Za-z0-9._-]).
std::string encode_path_component(const std::string &id);
std::string decode_path_component(const std::string &name);

// Current UTC time as ISO-8601 with seconds.
std::string utc_now();

}  // namespace salsa

#endif  // SALSA_STORE_H_
