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

#ifndef SALSA_TYPES_H_
#define SALSA_TYPES_H_

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace salsa {

enum class Side { kComplex, kSimplified };

enum class Operation {
  kInsertion,
  kDeletion,
  kSubstitution,
  kReorder,
  kSplit,
  kStructure,
};

enum class ReorderLevel { kWord, kComponent };

enum class InfoChange { kLess, kSame, kMore, kDifferent };

enum class Polarity { kQuality, kError, kTrivial };

enum class Family { kConceptual, kSyntactic, kLexical };

inline constexpr Operation kAllOperations[] = {
    Operation::kInsertion, Operation::kDeletion, Operation::kSubstitution,
    Operation::kReorder,   Operation::kSplit,    Operation::kStructure};
inline constexpr Family kAllFamilies[] = {
    Family::kConceptual, Family::kSyntactic, Family::kLexical};
inline constexpr InfoChange kAllInfoChanges[] = {
    InfoChange::kLess, InfoChange::kSame, InfoChange::kMore,
    InfoChange::kDifferent};

std::string_view to_string(Side side);
std::string_view to_string(Operation op);
std::string_view to_string(ReorderLevel level);
std::string_view to_string(InfoChange change);
std::string_view to_string(Polarity polarity);
std::string_view to_string(Family family);

// Parsers throw InvalidInput on unknown names.
Side parse_side(std::string_view name);
Operation parse_operation(std::string_view name);
ReorderLevel parse_reorder_level(std::string_view name);
InfoChange parse_info_change(std::string_view name);
Polarity parse_polarity(std::string_view name);
Family parse_family(std::string_view name);

inline bool is_composite(Operation op) {
  return op == Operation::kSplit || op == Operation::kStructure;
}

// Offsets are in Unicode code points, half-open [start, end).
struct Token {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string surface;

  bool operator==(const Token &) const = default;
};

struct TokenizedSentence {
  std::string id;
  std::string text;
  std::vector<Token> tokens;
  Side role = Side::kComplex;
  // Length of text in code points.
  std::size_t length = 0;

  bool operator==(const TokenizedSentence &) const = default;
};

struct SentencePair {
  std::string id;
  TokenizedSentence complex;
  TokenizedSentence simplified;
  std::string system;
  nlohmann::json metadata = nlohmann::json::object();

  const TokenizedSentence &side(Side s) const {
    return s == Side::kComplex ? complex : simplified;
  }
};

struct SpanRange {
  Side side = Side::kComplex;
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }
  auto operator<=>(const SpanRange &) const = default;
};

struct Classification {
  Polarity polarity = Polarity::kTrivial;
  std::optional<std::string> quality_type;
  std::set<std::string> error_types;
  bool grammar_error = false;
  // Efficacy (quality) or severity (error) in {1,2,3}; 0 for trivial.
  int rating = 0;

  bool operator==(const Classification &) const = default;
};

// A single annotated edit. Split and structure edits own their constituent
// single-operation edits by value; constituents keep their own ids.
struct Edit {
  std::string id;
  Operation operation = Operation::kSubstitution;
  std::vector<SpanRange> spans;
  std::optional<ReorderLevel> reorder_level;
  std::optional<InfoChange> information_change;
  std::vector<Edit> constituents;
  std::optional<Classification> classification;
  // Free-form structure sub-type (voice, tense, clausal form...). Not scored.
  std::optional<std::string> structure_label;

  bool operator==(const Edit &) const = default;
};

// Union of constituent spans per side, merged into disjoint sorted ranges.
std::vector<SpanRange> merged_spans(const std::vector<SpanRange> &spans);
// Spans used for measuring an edit: merged constituent spans for composites
// that have constituents, otherwise the edit's own spans merged.
std::vector<SpanRange> effective_spans(const Edit &edit);

}  // namespace salsa

#endif  // SALSA_TYPES_H_
