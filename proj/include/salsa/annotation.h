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

#ifndef SALSA_ANNOTATION_H_
#define SALSA_ANNOTATION_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "salsa/types.h"

namespace salsa {

enum class Stage { kSelection, kAdjudication, kClassification };

std::string_view to_string(Stage stage);
Stage parse_stage(std::string_view name);

// One annotator's submission for one pair at one workflow stage.
// Selection records carry operations and spans (information change is
// optional); classification records carry a Classification per adjudicated
// edit id.
struct AnnotationRecord {
  std::string annotator;
  std::string pair_id;
  Stage stage = Stage::kSelection;
  std::vector<Edit> edits;
  // ISO-8601 UTC, set by the store on submission when empty.
  std::string submitted_at;
  std::int64_t revision = 1;

  bool operator==(const AnnotationRecord &) const = default;
};

// A pair together with one classified edit set (an individual annotation or
// an aggregated one). Analytics and QE export operate on lists of these.
struct AnnotatedPair {
  SentencePair pair;
  std::vector<Edit> edits;
  std::string annotator;
};

}  // namespace salsa

#endif  // SALSA_ANNOTATION_H_
