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

#include "salsa/workflow.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "salsa/agreement.h"
#include "salsa/error.h"
#include "salsa/json_io.h"

namespace salsa {

namespace {

constexpr std::array<std::pair<std::string_view, TaskState>, 7> kStates{{
    {"unassigned", TaskState::kUnassigned},
    {"selecting", TaskState::kSelecting},
    {"awaiting_adjudication", TaskState::kAwaitingAdjudication},
    {"adjudicating", TaskState::kAdjudicating},
    {"awaiting_classification", TaskState::kAwaitingClassification},
    {"classifying", TaskState::kClassifying},
    {"complete", TaskState::kComplete},
}};

std::string RevisionKey(Stage stage, const std::string &annotator) {
  return std::string(to_string(stage)) + "/" + annotator;
}

bool Contains(const std::vector<std::string> &v, const std::string &x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

Edit StripClassification(Edit e) {
  e.classification.reset();
  for (Edit &c : e.constituents) c = StripClassification(std::move(c));
  return e;
}

}  // namespace

std::string_view to_string(TaskState state) {
  for (const auto &[name, s] : kStates) {
    if (s == state) return name;
  }
  return "?";
}

TaskState parse_task_state(std::string_view name) {
  for (const auto &[n, s] : kStates) {
    if (n == name) return s;
  }
  throw InvalidInput("unknown task state '" + std::string(name) + "'");
}

WorkflowTask assign_annotators(WorkflowTask task, const std::vector<std::string> &annotators) {
  if (task.state != TaskState::kUnassigned) {
    throw WorkflowError("task '" + task.pair_id + "' is " + std::string(to_string(task.state)) +
                        "; annotators can only be assigned to an unassigned task");
  }
  std::set<std::string> distinct(annotators.begin(), annotators.end());
  if (annotators.size() != kAnnotatorsPerTask || distinct.size() != kAnnotatorsPerTask ||
      distinct.count("")) {
    throw WorkflowError("exactly 3 distinct non-empty annotator ids are required");
  }
  task.assigned = annotators;
  task.selection_annotators = annotators;
  task.received.clear();
  task.state = TaskState::kSelecting;
  return task;
}

WorkflowTask assign_adjudicator(WorkflowTask task, const std::string &adjudicator) {
  if (task.state != TaskState::kAwaitingAdjudication) {
    throw WorkflowError("task '" + task.pair_id + "' is " + std::string(to_string(task.state)) +
                        "; an adjudicator can only be assigned after selection completes");
  }
  if (adjudicator.empty()) throw WorkflowError("adjudicator id must not be empty");
  if (Contains(task.selection_annotators, adjudicator)) {
    throw WorkflowError("adjudicator '" + adjudicator +
                        "' selected edits on this task; a fourth annotator must adjudicate");
  }
  task.adjudicator = adjudicator;
  task.assigned.clear();
  task.received.clear();
  task.state = TaskState::kAdjudicating;
  return task;
}

WorkflowTask start_classification(WorkflowTask task) {
  if (task.state != TaskState::kAwaitingClassification) {
    throw WorkflowError("task '" + task.pair_id + "' is " + std::string(to_string(task.state)) +
                        "; classification starts after adjudication");
  }
  task.assigned = task.selection_annotators;
  task.received.clear();
  task.state = TaskState::kClassifying;
  return task;
}

WorkflowTask submit(const AnnotationRecord &record, WorkflowTask task) {
  if (record.pair_id != task.pair_id) {
    throw WorkflowError("record for pair '" + record.pair_id + "' submitted to task '" +
                        task.pair_id + "'");
  }
  const std::string key = RevisionKey(record.stage, record.annotator);
  if (auto it = task.revisions.find(key); it != task.revisions.end() && record.revision <= it->second) {
    throw ConflictError("revision " + std::to_string(record.revision) + " of " + key +
                        " is not newer than accepted revision " + std::to_string(it->second));
  }
  const TaskState expected = record.stage == Stage::kSelection      ? TaskState::kSelecting
                             : record.stage == Stage::kAdjudication ? TaskState::kAdjudicating
                                                                    : TaskState::kClassifying;
  if (task.state != expected) {
    throw WorkflowError(std::string(to_string(record.stage)) + " submission rejected: task '" +
                        task.pair_id + "' is " + std::string(to_string(task.state)));
  }
  const bool allowed = record.stage == Stage::kAdjudication
                           ? task.adjudicator == record.annotator
                           : Contains(task.assigned, record.annotator);
  if (!allowed) {
    throw UnassignedAnnotator("annotator '" + record.annotator + "' is not assigned to the " +
                              std::string(to_string(record.stage)) + " stage of task '" +
                              task.pair_id + "'");
  }

  bool counts = true;
  if (record.stage == Stage::kClassification) {
    std::set<std::string> adjudicated;
    for (const Edit &e : *task.adjudicated_edits) adjudicated.insert(e.id);
    std::set<std::string> classified;
    for (const Edit &e : record.edits) {
      if (!adjudicated.count(e.id)) {
        throw WorkflowError("classification references edit '" + e.id +
                            "' which is not in the adjudicated set");
      }
      if (e.classification) classified.insert(e.id);
    }
    counts = classified == adjudicated;
  }

  task.revisions[key] = record.revision;
  switch (record.stage) {
    case Stage::kSelection:
      task.received.insert(record.annotator);
      if (task.received.size() == task.assigned.size()) {
        task.state = TaskState::kAwaitingAdjudication;
        task.assigned.clear();
        task.received.clear();
      }
      break;
    case Stage::kAdjudication: {
      std::vector<Edit> edits;
      for (const Edit &e : record.edits) edits.push_back(StripClassification(e));
      task.adjudicated_edits = std::move(edits);
      task.state = TaskState::kAwaitingClassification;
      break;
    }
    case Stage::kClassification:
      if (counts) {
        task.received.insert(record.annotator);
      } else {
        task.received.erase(record.annotator);
      }
      if (task.received.size() == task.assigned.size()) task.state = TaskState::kComplete;
      break;
  }
  return task;
}

std::vector<std::string> check_invariants(const WorkflowTask &task) {
  std::vector<std::string> out;
  const auto s = task.state;
  const bool per_annotator_stage = s == TaskState::kSelecting || s == TaskState::kClassifying ||
                                   s == TaskState::kComplete;
  if (per_annotator_stage) {
    std::set<std::string> distinct(task.assigned.begin(), task.assigned.end());
    if (task.assigned.size() != kAnnotatorsPerTask || distinct.size() != kAnnotatorsPerTask) {
      out.push_back("stage requires 3 distinct assigned annotators");
    }
  } else if (!task.assigned.empty()) {
    out.push_back("no annotators may be assigned in state " + std::string(to_string(s)));
  }
  for (const std::string &r : task.received) {
    if (!Contains(task.assigned, r)) out.push_back("received '" + r + "' is not assigned");
  }
  if ((s == TaskState::kSelecting || s == TaskState::kClassifying) &&
      task.received.size() >= task.assigned.size() && !task.assigned.empty()) {
    out.push_back("all submissions received but the stage did not advance");
  }
  if (s == TaskState::kComplete && task.received.size() != kAnnotatorsPerTask) {
    out.push_back("complete task must have 3 classification records");
  }
  if (s != TaskState::kUnassigned && task.selection_annotators.size() != kAnnotatorsPerTask) {
    out.push_back("selection annotators missing");
  }
  if (s == TaskState::kClassifying || s == TaskState::kComplete) {
    if (task.assigned != task.selection_annotators) {
      out.push_back("classifiers must be the original selection annotators");
    }
  }
  const bool needs_adjudicator = s >= TaskState::kAdjudicating;
  if (needs_adjudicator != task.adjudicator.has_value()) {
    out.push_back("adjudicator presence does not match state");
  }
  if (task.adjudicator && Contains(task.selection_annotators, *task.adjudicator)) {
    out.push_back("adjudicator must not be a selection annotator");
  }
  const bool needs_edits = s >= TaskState::kAwaitingClassification;
  if (needs_edits != task.adjudicated_edits.has_value()) {
    out.push_back("adjudicated edits presence does not match state");
  }
  return out;
}

bool is_pending_for(const WorkflowTask &task, const std::string &annotator) {
  switch (task.state) {
    case TaskState::kSelecting:
    case TaskState::kClassifying:
      return Contains(task.assigned, annotator) && !task.received.count(annotator);
    case TaskState::kAdjudicating:
      return task.adjudicator == annotator;
    default:
      return false;
  }
}

std::vector<Edit> aggregate_classifications(const std::vector<Edit> &adjudicated,
                                            const std::vector<AnnotationRecord> &classifications,
                                            const Typology &typology) {
  std::vector<Edit> out;
  for (const Edit &base : adjudicated) {
    std::vector<Classification> votes;
    for (const AnnotationRecord &r : classifications) {
      for (const Edit &e : r.edits) {
        if (e.id == base.id && e.classification) votes.push_back(*e.classification);
      }
    }
    Edit merged = StripClassification(base);
    if (votes.empty()) {
      out.push_back(std::move(merged));
      continue;
    }

    std::array<std::size_t, 3> polarity_votes{};
    for (const Classification &c : votes) ++polarity_votes[static_cast<std::size_t>(c.polarity)];
    // Preference among tied counts: error, quality, trivial.
    Polarity winner = Polarity::kError;
    for (Polarity p : {Polarity::kQuality, Polarity::kTrivial}) {
      if (polarity_votes[static_cast<std::size_t>(p)] > polarity_votes[static_cast<std::size_t>(winner)]) {
        winner = p;
      }
    }

    Classification result;
    result.polarity = winner;
    std::vector<const Classification *> agreeing;
    for (const Classification &c : votes) {
      if (c.polarity == winner) agreeing.push_back(&c);
    }

    auto catalog_rank = [&](const std::string &id) {
      return typology.find(id) ? typology.index_of(id) : typology.types().size();
    };
    auto plurality = [&](const std::map<std::string, std::size_t> &tally) {
      std::string best;
      std::size_t best_count = 0;
      for (const auto &[id, count] : tally) {
        if (count > best_count ||
            (count == best_count && std::make_pair(catalog_rank(id), id) <
                                        std::make_pair(catalog_rank(best), best))) {
          best = id;
          best_count = count;
        }
      }
      return best;
    };

    if (winner == Polarity::kQuality) {
      std::map<std::string, std::size_t> tally;
      for (const Classification *c : agreeing) {
        if (c->quality_type) ++tally[*c->quality_type];
      }
      if (!tally.empty()) result.quality_type = plurality(tally);
    } else if (winner == Polarity::kError) {
      std::map<std::string, std::size_t> tally;
      for (const Classification *c : agreeing) {
        for (const std::string &t : c->error_types) ++tally[t];
      }
      for (const auto &[id, count] : tally) {
        if (2 * count > agreeing.size()) result.error_types.insert(id);
      }
      if (result.error_types.empty() && !tally.empty()) result.error_types.insert(plurality(tally));
    }

    if (winner != Polarity::kTrivial) {
      double sum = 0.0;
      for (const Classification *c : agreeing) sum += c->rating;
      result.rating = static_cast<int>(std::round(sum / static_cast<double>(agreeing.size())));
    }
    std::size_t grammar = 0;
    for (const Classification &c : votes) grammar += c.grammar_error ? 1 : 0;
    result.grammar_error = 2 * grammar > votes.size();

    merged.classification = std::move(result);
    out.push_back(std::move(merged));
  }
  return out;
}

std::vector<Edit> aggregate_final(const WorkflowTask &task,
                                  const std::vector<AnnotationRecord> &records,
                                  const Typology &typology) {
  if (task.state != TaskState::kComplete) {
    throw WorkflowError("task '" + task.pair_id + "' is not complete");
  }
  std::vector<AnnotationRecord> mine;
  for (const AnnotationRecord &r : latest_records(records)) {
    if (r.pair_id == task.pair_id && r.stage == Stage::kClassification &&
        Contains(task.assigned, r.annotator)) {
      mine.push_back(r);
    }
  }
  return aggregate_classifications(*task.adjudicated_edits, mine, typology);
}

nlohmann::json task_to_json(const WorkflowTask &task) {
  nlohmann::json out = {{"pair_id", task.pair_id},
                        {"state", to_string(task.state)},
                        {"assigned", task.assigned},
                        {"received", task.received},
                        {"selection_annotators", task.selection_annotators},
                        {"revisions", task.revisions}};
  if (task.adjudicator) out["adjudicator"] = *task.adjudicator;
  if (task.adjudicated_edits) {
    nlohmann::json edits = nlohmann::json::array();
    for (const Edit &e : *task.adjudicated_edits) edits.push_back(edit_to_json(e));
    out["adjudicated_edits"] = edits;
  }
  return out;
}

WorkflowTask task_from_json(const nlohmann::json &doc, const std::string &path) {
  if (!doc.is_object()) throw SchemaError(path, "expected object");
  WorkflowTask t;
  try {
    t.pair_id = doc.at("pair_id").get<std::string>();
    t.state = parse_task_state(doc.at("state").get<std::string>());
    t.assigned = doc.value("assigned", std::vector<std::string>{});
    t.received = doc.value("received", std::set<std::string>{});
    t.selection_annotators = doc.value("selection_annotators", std::vector<std::string>{});
    t.revisions = doc.value("revisions", std::map<std::string, std::int64_t>{});
    if (doc.contains("adjudicator")) t.adjudicator = doc.at("adjudicator").get<std::string>();
  } catch (const nlohmann::json::exception &e) {
    throw SchemaError(path, e.what());
  } catch (const InvalidInput &e) {
    throw SchemaError(path + "/state", e.what());
  }
  if (auto it = doc.find("adjudicated_edits"); it != doc.end()) {
    if (!it->is_array()) throw SchemaError(path + "/adjudicated_edits", "expected array");
    std::vector<Edit> edits;
    for (std::size_t i = 0; i < it->size(); ++i) {
      edits.push_back(edit_from_json((*it)[i], path + "/adjudicated_edits/" + std::to_string(i)));
    }
    t.adjudicated_edits = std::move(edits);
  }
  return t;
}

}  // namespace salsa
