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

#ifndef SALSA_WORKFLOW_H_
#define SALSA_WORKFLOW_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "salsa/annotation.h"
#include "salsa/typology.h"

namespace salsa {

// Selection by three annotators, adjudication by a fourth, then
// classification by the original three.
enum class TaskState {
  kUnassigned,
  kSelecting,
  kAwaitingAdjudication,
  kAdjudicating,
  kAwaitingClassification,
  kClassifying,
  kComplete,
};

std::string_view to_string(TaskState state);
TaskState parse_task_state(std::string_view name);

inline constexpr std::size_t kAnnotatorsPerTask = 3;

struct WorkflowTask {
  std::string pair_id;
  TaskState state = TaskState::kUnassigned;
  // Annotators of the current selection or classification stage.
  std::vector<std::string> assigned;
  std::set<std::string> received;
  std::vector<std::string> selection_annotators;
  std::optional<std::string> adjudicator;
  std::optional<std::vector<Edit>> adjudicated_edits;
  // Last accepted revision per "stage/annotator".
  std::map<std::string, std::int64_t> revisions;

  bool operator==(const WorkflowTask &) const = default;
};

// Transitions return the updated task and leave the input untouched; a
// rejected event throws (WorkflowError, UnassignedAnnotator, ConflictError).
WorkflowTask assign_annotators(WorkflowTask task, const std::vector<std::string> &annotators);
WorkflowTask assign_adjudicator(WorkflowTask task, const std::string &adjudicator);
WorkflowTask start_classification(WorkflowTask task);

// Accepts a record for the task's current stage. Selection and adjudication
// records always count as received; a classification record counts once it
// classifies every adjudicated edit. The stage advances when every assigned
// annotator has been received. An adjudication record installs its edits
// (classifications stripped) as the adjudicated set.
WorkflowTask submit(const AnnotationRecord &record, WorkflowTask task);

// Empty when the task satisfies every workflow invariant.
std::vector<std::string> check_invariants(const WorkflowTask &task);

// True when `annotator` has work to do on the task right now.
bool is_pending_for(const WorkflowTask &task, const std::string &annotator);

// Merges per-edit classifications from several classifiers: majority
// polarity (ties go error > quality > trivial), majority type within the
// polarity (ties by catalog order; error types kept when chosen by more than
// half of the error voters), magnitude = mean of the winning voters'
// magnitudes rounded half away from zero, grammar flag by strict majority.
std::vector<Edit> aggregate_classifications(const std::vector<Edit> &adjudicated,
                                            const std::vector<AnnotationRecord> &classifications,
                                            const Typology &typology);

// aggregate_classifications over the latest classification record of each
// assigned classifier. Throws WorkflowError unless the task is complete.
std::vector<Edit> aggregate_final(const WorkflowTask &task,
                                  const std::vector<AnnotationRecord> &records,
                                  const Typology &typology);

nlohmann::json task_to_json(const WorkflowTask &task);
WorkflowTask task_from_json(const nlohmann::json &doc, const std::string &path);

}  // namespace salsa

#endif  // SALSA_WORKFLOW_H_
