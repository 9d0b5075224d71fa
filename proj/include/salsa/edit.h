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

#ifndef SALSA_EDIT_H_
#define SALSA_EDIT_H_

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "salsa/typology.h"
#include "salsa/types.h"

namespace salsa {

struct Violation {
  std::string edit_id;
  std::string code;
  std::string message;
  std::optional<SpanRange> span;
};

// Structural and typological checks for one edit against its pair. An empty
// result means the edit is valid. Classification, when present, must be
// consistent with the catalog.
std::vector<Violation> validate_edit(const Edit &edit, const SentencePair &pair,
                                     const Typology &typology);

// validate_edit over a list plus id uniqueness (constituent ids included).
std::vector<Violation> validate_edits(const std::vector<Edit> &edits,
                                      const SentencePair &pair,
                                      const Typology &typology);

struct TokenCoverage {
  std::set<std::size_t> complex;
  std::set<std::size_t> simplified;

  const std::set<std::size_t> &side(Side s) const {
    return s == Side::kComplex ? complex : simplified;
  }
  bool operator==(const TokenCoverage &) const = default;
};

// Token indices intersecting the edit's spans. Composites report the union
// over their constituents.
TokenCoverage tokens_covered(const Edit &edit, const SentencePair &pair);

// Token indices of `sentence` that intersect [start, end).
std::set<std::size_t> tokens_in_range(const TokenizedSentence &sentence,
                                      std::size_t start, std::size_t end);

struct SnapResult {
  SpanRange span;
  bool adjusted = false;
};

// Widens a span outward to the token boundaries it touches. Throws
// InvalidInput when the span touches no token.
SnapResult snap_span(const SpanRange &span, const TokenizedSentence &sentence);

// Snaps every span of an edit (recursively). Returns the number of spans
// that moved; composite spans are recomputed from constituents when moved.
std::size_t snap_edit(Edit &edit, const SentencePair &pair);

// Character offsets in the simplified sentence where a sentence ends:
// terminal punctuation (. ! ?) optionally followed by closing quotes or
// brackets, then whitespace or end of text, and not between two digits.
std::vector<std::size_t> sentence_boundaries(const TokenizedSentence &sentence);

// One empty split shell per internal sentence boundary of the simplified
// side. Shell ids are "split-<k>"; spans cover the boundary token.
std::vector<Edit> detect_split_candidates(const SentencePair &pair);

// Builds a composite edit whose spans are the union of the constituents'.
Edit make_composite(std::string id, Operation op, std::vector<Edit> constituents);

}  // namespace salsa

#endif  // SALSA_EDIT_H_
