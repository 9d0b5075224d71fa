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

#include "salsa/edit.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <string>

#include "salsa/error.h"
#include "salsa/tokenizer.h"

namespace salsa {
namespace {

std::string SpanText(const SpanRange &s) {
  return std::string(to_string(s.side)) + "[" + std::to_string(s.start) + "," +
         std::to_string(s.end) + ")";
}

bool OnTokenBoundaries(const SpanRange &span, const TokenizedSentence &sentence) {
  bool start_ok = false;
  bool end_ok = false;
  for (const Token &t : sentence.tokens) {
    start_ok = start_ok || t.start == span.start;
    end_ok = end_ok || t.end == span.end;
  }
  return start_ok && end_ok;
}

void CheckSpans(const Edit &edit, const SentencePair &pair, std::vector<Violation> &out) {
  for (const SpanRange &span : edit.spans) {
    const TokenizedSentence &sentence = pair.side(span.side);
    if (span.start >= span.end || span.end > sentence.length) {
      out.push_back({edit.id, "span-out-of-range",
                     "span " + SpanText(span) + " is empty or outside the " +
                         std::string(to_string(span.side)) + " sentence (length " +
                         std::to_string(sentence.length) + ")",
                     span});
      continue;
    }
    if (!OnTokenBoundaries(span, sentence)) {
      out.push_back({edit.id, "span-not-token-aligned",
                     "span " + SpanText(span) + " does not start and end on token boundaries",
                     span});
    }
  }
  std::vector<SpanRange> sorted = edit.spans;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].side == sorted[i - 1].side && sorted[i].start < sorted[i - 1].end) {
      out.push_back({edit.id, "overlapping-spans",
                     "spans " + SpanText(sorted[i - 1]) + " and " + SpanText(sorted[i]) +
                         " of the same edit overlap",
                     sorted[i]});
    }
  }
}

void CheckSides(const Edit &edit, std::vector<Violation> &out) {
  std::size_t complex = 0;
  std::size_t simplified = 0;
  for (const SpanRange &s : edit.spans) (s.side == Side::kComplex ? complex : simplified)++;
  const std::string op(to_string(edit.operation));
  switch (edit.operation) {
    case Operation::kInsertion:
      if (complex > 0) {
        out.push_back({edit.id, "side-constraint", "insertion must not touch complex side", {}});
      }
      if (simplified == 0) {
        out.push_back({edit.id, "side-constraint", "insertion requires a simplified-side span", {}});
      }
      break;
    case Operation::kDeletion:
      if (simplified > 0) {
        out.push_back({edit.id, "side-constraint", "deletion must not touch simplified side", {}});
      }
      if (complex == 0) {
        out.push_back({edit.id, "side-constraint", "deletion requires a complex-side span", {}});
      }
      break;
    case Operation::kSubstitution:
    case Operation::kReorder:
      if (complex == 0 || simplified == 0) {
        out.push_back({edit.id, "side-constraint", op + " requires spans on both sides", {}});
      }
      break;
    case Operation::kSplit:
    case Operation::kStructure:
      break;
  }
}

void CheckClassification(const Edit &edit, const Typology &typology,
                         std::vector<Violation> &out) {
  const Classification &c = *edit.classification;
  auto add = [&](std::string code, std::string message) {
    out.push_back({edit.id, std::move(code), std::move(message), {}});
  };

  std::vector<const TypeDef *> defs;
  switch (c.polarity) {
    case Polarity::kQuality:
      if (!c.quality_type) add("classification-shape", "quality edit requires exactly one quality type");
      if (!c.error_types.empty()) add("classification-shape", "quality edit must not carry error types");
      if (c.quality_type) {
        const TypeDef *def = typology.find(*c.quality_type);
        if (def == nullptr) {
          add("unknown-type", "unknown type '" + *c.quality_type + "'");
        } else if (def->polarity != Polarity::kQuality) {
          add("polarity-mismatch", "type '" + def->id + "' is not a quality type");
        } else {
          defs.push_back(def);
        }
      }
      break;
    case Polarity::kError:
      if (c.error_types.empty()) add("classification-shape", "error edit requires at least one error type");
      if (c.quality_type) add("classification-shape", "error edit must not carry a quality type");
      for (const std::string &id : c.error_types) {
        const TypeDef *def = typology.find(id);
        if (def == nullptr) {
          add("unknown-type", "unknown type '" + id + "'");
        } else if (def->polarity != Polarity::kError) {
          add("polarity-mismatch", "type '" + id + "' is not an error type");
        } else {
          defs.push_back(def);
        }
      }
      for (std::size_t i = 1; i < defs.size(); ++i) {
        if (defs[i]->family != defs[0]->family) {
          add("mixed-error-families", "error types '" + defs[0]->id + "' and '" + defs[i]->id +
                                          "' belong to different families");
        }
      }
      break;
    case Polarity::kTrivial:
      if (c.quality_type || !c.error_types.empty()) {
        add("classification-shape", "trivial edit must not carry quality or error types");
      }
      if (const TypeDef *def = typology.trivial_type_for(edit.operation)) {
        defs.push_back(def);
      } else {
        add("type-operation", std::string(to_string(edit.operation)) +
                                  " cannot be classified as trivial");
      }
      break;
  }

  if (c.polarity == Polarity::kTrivial) {
    if (c.rating != 0) add("rating-range", "trivial edit must have rating 0");
  } else if (c.rating < 1 || c.rating > 3) {
    add("rating-range", "rating must be 1, 2 or 3");
  }

  const bool content_op = edit.operation == Operation::kInsertion ||
                          edit.operation == Operation::kDeletion ||
                          edit.operation == Operation::kSubstitution;
  if (content_op && !edit.information_change) {
    add("missing-information-change", "classified " + std::string(to_string(edit.operation)) +
                                          " requires an information change");
  }
  for (const TypeDef *def : defs) {
    if (!def->operations.count(edit.operation)) {
      add("type-operation", "type '" + def->id + "' cannot be produced by a " +
                                std::string(to_string(edit.operation)));
    }
    if (edit.information_change && !def->information_changes.count(*edit.information_change)) {
      add("type-information-change",
          "type '" + def->id + "' does not allow information change '" +
              std::string(to_string(*edit.information_change)) + "'");
    }
  }
}

void Validate(const Edit &edit, const SentencePair &pair, const Typology &typology,
              bool is_constituent, std::vector<Violation> &out) {
  if (edit.id.empty()) out.push_back({edit.id, "missing-id", "edit id must not be empty", {}});
  CheckSpans(edit, pair, out);

  if (edit.operation == Operation::kReorder && !edit.reorder_level) {
    out.push_back({edit.id, "reorder-level", "reorder requires a reorder level", {}});
  }
  if (edit.operation != Operation::kReorder && edit.reorder_level) {
    out.push_back({edit.id, "reorder-level", "only reorder edits carry a reorder level", {}});
  }
  if (edit.structure_label && edit.operation != Operation::kStructure) {
    out.push_back({edit.id, "structure-label", "only structure edits carry a sub-type label", {}});
  }

  if (is_composite(edit.operation)) {
    if (is_constituent) {
      out.push_back({edit.id, "nested-composite",
                     "constituents must be single-operation edits", {}});
    }
    if (edit.constituents.empty()) {
      out.push_back({edit.id, "composite-empty", "composite requires constituents", {}});
    } else {
      for (const Edit &c : edit.constituents) Validate(c, pair, typology, true, out);
      if (merged_spans(edit.spans) != effective_spans(edit)) {
        out.push_back({edit.id, "composite-spans",
                       "composite spans must equal the union of constituent spans", {}});
      }
    }
  } else {
    if (!edit.constituents.empty()) {
      out.push_back({edit.id, "unexpected-constituents",
                     "only split and structure edits have constituents", {}});
    }
    CheckSides(edit, out);
  }

  if (edit.classification) CheckClassification(edit, typology, out);
}

void CollectIds(const Edit &edit, std::vector<std::string> &ids) {
  ids.push_back(edit.id);
  for (const Edit &c : edit.constituents) CollectIds(c, ids);
}

void Cover(const Edit &edit, const SentencePair &pair, TokenCoverage &out) {
  if (is_composite(edit.operation) && !edit.constituents.empty()) {
    for (const Edit &c : edit.constituents) Cover(c, pair, out);
    return;
  }
  for (const SpanRange &span : edit.spans) {
    auto tokens = tokens_in_range(pair.side(span.side), span.start, span.end);
    auto &target = span.side == Side::kComplex ? out.complex : out.simplified;
    target.insert(tokens.begin(), tokens.end());
  }
}

}  // namespace

std::vector<Violation> validate_edit(const Edit &edit, const SentencePair &pair,
                                     const Typology &typology) {
  std::vector<Violation> out;
  Validate(edit, pair, typology, false, out);
  return out;
}

std::vector<Violation> validate_edits(const std::vector<Edit> &edits, const SentencePair &pair,
                                      const Typology &typology) {
  std::vector<Violation> out;
  std::vector<std::string> ids;
  for (const Edit &e : edits) {
    auto v = validate_edit(e, pair, typology);
    out.insert(out.end(), v.begin(), v.end());
    CollectIds(e, ids);
  }
  std::sort(ids.begin(), ids.end());
  for (std::size_t i = 1; i < ids.size(); ++i) {
    if (ids[i] == ids[i - 1] && (i < 2 || ids[i - 2] != ids[i])) {
      out.push_back({ids[i], "duplicate-id", "edit id '" + ids[i] + "' is used more than once", {}});
    }
  }
  return out;
}

std::set<std::size_t> tokens_in_range(const TokenizedSentence &sentence, std::size_t start,
                                      std::size_t end) {
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    const Token &t = sentence.tokens[i];
    if (t.start < end && start < t.end) out.insert(i);
  }
  return out;
}

TokenCoverage tokens_covered(const Edit &edit, const SentencePair &pair) {
  TokenCoverage out;
  Cover(edit, pair, out);
  return out;
}

SnapResult snap_span(const SpanRange &span, const TokenizedSentence &sentence) {
  auto tokens = tokens_in_range(sentence, span.start, span.end);
  if (tokens.empty()) {
    throw InvalidInput("span " + SpanText(span) + " covers no token");
  }
  SpanRange snapped{span.side, sentence.tokens[*tokens.begin()].start,
                    sentence.tokens[*tokens.rbegin()].end};
  return {snapped, snapped != span};
}

std::size_t snap_edit(Edit &edit, const SentencePair &pair) {
  std::size_t moved = 0;
  for (Edit &c : edit.constituents) moved += snap_edit(c, pair);
  for (SpanRange &span : edit.spans) {
    SnapResult r = snap_span(span, pair.side(span.side));
    if (r.adjusted) {
      span = r.span;
      ++moved;
    }
  }
  if (is_composite(edit.operation) && !edit.constituents.empty() && moved > 0) {
    edit.spans = effective_spans(edit);
  }
  return moved;
}

namespace {

bool IsTerminal(const std::string &s) { return s == "." || s == "!" || s == "?"; }

bool IsClosing(const std::string &s) {
  return s == "\"" || s == "'" || s == ")" || s == "]" || s == "\xE2\x80\x9D" ||
         s == "\xE2\x80\x99";
}

bool IsAbbreviation(const std::string &word) {
  static const std::array<std::string_view, 22> kAbbrev = {
      "mr", "mrs", "ms", "dr", "prof", "st", "jr", "sr", "vs", "etc", "e.g",
      "i.e", "no", "fig", "inc", "ltd", "co", "u.s", "a.m", "p.m", "mt", "gen"};
  std::string lower;
  for (char ch : word) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (std::find(kAbbrev.begin(), kAbbrev.end(), lower) != kAbbrev.end()) return true;
  // Single capital initial ("J. R. R. Tolkien").
  return word.size() == 1 && std::isupper(static_cast<unsigned char>(word[0]));
}

bool StartsSentence(const std::string &s) {
  const std::u32string cps = decode_utf8(s);
  if (cps.empty()) return false;
  const char32_t c = cps[0];
  if (c < 0x80) {
    return std::isupper(static_cast<int>(c)) || std::isdigit(static_cast<int>(c)) || c == '"' ||
           c == '\'' || c == '(';
  }
  // Non-ASCII letters: accept anything that is not lowercase Latin-1/Extended.
  return !(c >= 0x00DF && c <= 0x00FF) && !is_punctuation(c);
}

}  // namespace

std::vector<std::size_t> sentence_boundaries(const TokenizedSentence &sentence) {
  std::vector<std::size_t> out;
  const auto &tokens = sentence.tokens;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!IsTerminal(tokens[i].surface)) continue;
    // Previous token glued to the period is an abbreviation or initial.
    if (tokens[i].surface == "." && i > 0 && tokens[i - 1].end == tokens[i].start &&
        IsAbbreviation(tokens[i - 1].surface)) {
      continue;
    }
    std::size_t j = i + 1;
    while (j < tokens.size() && (IsTerminal(tokens[j].surface) || IsClosing(tokens[j].surface)) &&
           tokens[j].start == tokens[j - 1].end) {
      ++j;
    }
    if (j >= tokens.size()) break;
    if (tokens[j].start == tokens[j - 1].end) continue;  // no whitespace after
    if (!StartsSentence(tokens[j].surface)) continue;
    out.push_back(tokens[j - 1].end);
    i = j - 1;
  }
  return out;
}

std::vector<Edit> detect_split_candidates(const SentencePair &pair) {
  std::vector<Edit> shells;
  const TokenizedSentence &simplified = pair.simplified;
  for (std::size_t boundary : sentence_boundaries(simplified)) {
    Edit shell;
    shell.id = "split-" + std::to_string(shells.size() + 1);
    shell.operation = Operation::kSplit;
    for (const Token &t : simplified.tokens) {
      if (t.end == boundary) {
        shell.spans.push_back({Side::kSimplified, t.start, t.end});
        break;
      }
    }
    shells.push_back(std::move(shell));
  }
  return shells;
}

Edit make_composite(std::string id, Operation op, std::vector<Edit> constituents) {
  if (!is_composite(op)) throw InvalidInput("make_composite requires split or structure");
  Edit edit;
  edit.id = std::move(id);
  edit.operation = op;
  edit.constituents = std::move(constituents);
  edit.spans = effective_spans(edit);
  return edit;
}

}  // namespace salsa
