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

#ifndef SALSA_REPORTS_H_
#define SALSA_REPORTS_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "salsa/agreement.h"
#include "salsa/analytics.h"
#include "salsa/annotation.h"
#include "salsa/scoring.h"
#include "salsa/typology.h"
#include "salsa/workflow.h"

namespace salsa {

// Report builders shared by the command-line tool and the HTTP service.

enum class View { kIndividual, kAggregated };
std::string_view to_string(View view);
View parse_view(std::string_view name);

struct ClassifiedData {
  std::vector<AnnotatedPair> data;
  // Pairs without usable classifications, in input order.
  std::vector<std::string> missing;
  std::vector<std::string> warnings;
  bool partial() const { return !missing.empty(); }
};

// Individual view: one entry per (pair, annotator) from the latest
// classification record. Aggregated view: one entry per pair; a complete
// workflow task supplies the adjudicated set, otherwise the classifiers'
// records are merged directly when they classify the same edit ids.
// Entries come back in canonical order.
ClassifiedData classified_view(const std::vector<SentencePair> &pairs,
                               const std::vector<AnnotationRecord> &records, View view,
                               const Typology &typology,
                               const std::map<std::string, WorkflowTask> &tasks = {});

nlohmann::json scores_json(const ClassifiedData &data, View view, const WeightScheme &weights,
                           const Typology &typology);
std::string scores_tsv(const ClassifiedData &data, const WeightScheme &weights,
                       const Typology &typology);

struct AgreementOptions {
  std::vector<EditClass> classes = default_edit_classes();
  bool expand_composites = false;
  Stage stage = Stage::kSelection;
};

nlohmann::json agreement_json(const std::vector<SentencePair> &pairs,
                              const std::vector<AnnotationRecord> &records,
                              const Typology &typology, const AgreementOptions &options);
std::string agreement_tsv(const nlohmann::json &report);

nlohmann::json stats_json(const ClassifiedData &data, const WeightScheme &weights,
                          const Typology &typology, const std::vector<std::size_t> &length_edges,
                          bool edit_distance);
std::string stats_tsv(const nlohmann::json &report);

}  // namespace salsa

#endif  // SALSA_REPORTS_H_
