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

#include "salsa/types.h"

#include <algorithm>
#include <array>
#include <string>
#include <utility>

#include "salsa/annotation.h"
#include "salsa/error.h"

namespace salsa {
namespace {

template <typename Enum, std::size_t N>
Enum ParseName(std::string_view name,
               const std::array<std::pair<std::string_view, Enum>, N> &table,
               std::string_view what) {
  for (const auto &[key, value] : table) {
    if (key == name) return value;
  }
  throw InvalidInput("unknown " + std::string(what) + " '" + std::string(name) +
                     "'");
}

constexpr std::array<std::pair<std::string_view, Side>, 2> kSides{{
    {"complex", Side::kComplex},
    {"simplified", Side::kSimplified},
}};
constexpr std::array<std::pair<std::string_view, Operation>, 6> kOperations{{
    {"insertion", Operation::kInsertion},
    {"deletion", Operation::kDeletion},
    {"substitution", Operation::kSubstitution},
    {"reorder", Operation::kReorder},
    {"split", Operation::kSplit},
    {"structure", Operation::kStructure},
}};
constexpr std::array<std::pair<std::string_view, ReorderLevel>, 2> kLevels{{
    {"word", ReorderLevel::kWord},
    {"component", ReorderLevel::kComponent},
}};
constexpr std::array<std::pair<std::string_view, InfoChange>, 4> kChanges{{
    {"less", InfoChange::kLess},
    {"same", InfoChange::kSame},
    {"more", InfoChange::kMore},
    {"different", InfoChange::kDifferent},
}};
constexpr std::array<std::pair<std::string_view, Polarity>, 3> kPolarities{{
    {"quality", Polarity::kQuality},
    {"error", Polarity::kError},
    {"trivial", Polarity::kTrivial},
}};
constexpr std::array<std::pair<std::string_view, Family>, 3> kFamilies{{
    {"conceptual", Family::kConceptual},
    {"syntactic", Family::kSyntactic},
    {"lexical", Family::kLexical},
}};
constexpr std::array<std::pair<std::string_view, Stage>, 3> kStages{{
    {"selection", Stage::kSelection},
    {"adjudication", Stage::kAdjudication},
    {"classification", Stage::kClassification},
}};

template <typename Enum, std::size_t N>
std::string_view NameOf(Enum value,
                        const std::array<std::pair<std::string_view, Enum>, N> &table) {
  for (const auto &[key, v] : table) {
    if (v == value) return key;
  }
  return "?";
}

}  // namespace

std::string_view to_string(Side side) { return NameOf(side, kSides); }
std::string_view to_string(Operation op) { return NameOf(op, kOperations); }
std::string_view to_string(ReorderLevel level) { return NameOf(level, kLevels); }
std::string_view to_string(InfoChange change) { return NameOf(change, kChanges); }
std::string_view to_string(Polarity polarity) { return NameOf(polarity, kPolarities); }
std::string_view to_string(Family family) { return NameOf(family, kFamilies); }
std::string_view to_string(Stage stage) { return NameOf(stage, kStages); }

Side parse_side(std::string_view name) { return ParseName(name, kSides, "side"); }
Operation parse_operation(std::string_view name) {
  return ParseName(name, kOperations, "operation");
}
ReorderLevel parse_reorder_level(std::string_view name) {
  return ParseName(name, kLevels, "reorder level");
}
InfoChange parse_info_change(std::string_view name) {
  return ParseName(name, kChanges, "information change");
}
Polarity parse_polarity(std::string_view name) {
  return ParseName(name, kPolarities, "polarity");
}
Family parse_family(std::string_view name) {
  return ParseName(name, kFamilies, "family");
}
Stage parse_stage(std::string_view name) { return ParseName(name, kStages, "stage"); }

std::vector<SpanRange> merged_spans(const std::vector<SpanRange> &spans) {
  std::vector<SpanRange> sorted = spans;
  std::sort(sorted.begin(), sorted.end());
  std::vector<SpanRange> out;
  for (const SpanRange &s : sorted) {
    if (!out.empty() && out.back().side == s.side && s.start <= out.back().end) {
      out.back().end = std::max(out.back().end, s.end);
    } else {
      out.push_back(s);
    }
  }
  return out;
}

namespace {

void CollectConstituentSpans(const Edit &edit, std::vector<SpanRange> &out) {
  if (edit.constituents.empty()) {
    out.insert(out.end(), edit.spans.begin(), edit.spans.end());
    return;
  }
  for (const Edit &c : edit.constituents) CollectConstituentSpans(c, out);
}

}  // namespace

std::vector<SpanRange> effective_spans(const Edit &edit) {
  std::vector<SpanRange> all;
  CollectConstituentSpans(edit, all);
  return merged_spans(all);
}

}  // namespace salsa
