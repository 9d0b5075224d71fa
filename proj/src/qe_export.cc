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

#include "salsa/qe_export.h"

#include <cstdlib>

#include "json.hpp"
#include "salsa/edit.h"
#include "salsa/error.h"
#include "salsa/json_io.h"

namespace salsa {

std::string_view to_string(WordLabel label) {
  switch (label) {
    case WordLabel::kQuality:
      return "QUALITY";
    case WordLabel::kOk:
      return "OK";
    case WordLabel::kError:
      return "ERROR";
  }
  return "?";
}

namespace {

const Classification &RequireClassified(const Edit &edit, const SentencePair &pair) {
  if (!edit.classification) {
    throw InvalidInput("edit '" + edit.id + "' of pair '" + pair.id + "' is not classified");
  }
  return *edit.classification;
}

}  // namespace

std::vector<int> word_ratings(const SentencePair &pair, const std::vector<Edit> &edits, Side side) {
  std::vector<int> out(pair.side(side).tokens.size(), 0);
  std::vector<bool> seen(out.size(), false);
  for (const Edit &edit : edits) {
    const int r = signed_rating(RequireClassified(edit, pair));
    const TokenCoverage cov = tokens_covered(edit, pair);
    for (std::size_t t : cov.side(side)) {
      const int cur = out[t];
      if (!seen[t] || std::abs(r) > std::abs(cur) || (std::abs(r) == std::abs(cur) && r < cur)) {
        out[t] = r;
      }
      seen[t] = true;
    }
  }
  return out;
}

std::vector<WordLabel> word_labels(const SentencePair &pair, const std::vector<Edit> &edits,
                                   Side side) {
  std::vector<WordLabel> out(pair.side(side).tokens.size(), WordLabel::kOk);
  for (const Edit &edit : edits) {
    const Classification &c = RequireClassified(edit, pair);
    if (c.polarity == Polarity::kTrivial) continue;
    const WordLabel label = c.polarity == Polarity::kError ? WordLabel::kError : WordLabel::kQuality;
    const TokenCoverage cov = tokens_covered(edit, pair);
    for (std::size_t t : cov.side(side)) {
      if (out[t] != WordLabel::kError) out[t] = label;
    }
  }
  return out;
}

QeLosses qe_losses(double pred_sentence, double gold_sentence, std::span<const double> pred_words,
                   std::span<const double> gold_words, double lambda_s, double lambda_w) {
  if (pred_words.size() != gold_words.size()) {
    throw InvalidInput("word prediction length " + std::to_string(pred_words.size()) +
                       " does not match gold length " + std::to_string(gold_words.size()));
  }
  if (pred_words.empty()) throw InvalidInput("word lists must not be empty");
  if (lambda_s < 0 || lambda_w < 0) throw InvalidInput("loss weights must be non-negative");
  QeLosses out;
  const double d = gold_sentence - pred_sentence;
  out.sentence = 0.5 * d * d;
  double sum = 0.0;
  for (std::size_t i = 0; i < pred_words.size(); ++i) {
    const double dw = gold_words[i] - pred_words[i];
    sum += 0.5 * dw * dw;
  }
  out.word = sum / static_cast<double>(pred_words.size());
  out.combined = lambda_s * out.sentence + lambda_w * out.word;
  return out;
}

namespace {

nlohmann::json SideRecord(const SentencePair &pair, const std::vector<Edit> &edits, Side side) {
  nlohmann::json tokens = nlohmann::json::array();
  for (const Token &t : pair.side(side).tokens) tokens.push_back(t.surface);
  nlohmann::json labels = nlohmann::json::array();
  for (WordLabel l : word_labels(pair, edits, side)) labels.push_back(to_string(l));
  return {{"tokens", tokens}, {"ratings", word_ratings(pair, edits, side)}, {"labels", labels}};
}

}  // namespace

std::string export_qe_jsonl(const std::vector<AnnotatedPair> &data, const WeightScheme &weights,
                            const Typology &typology, bool include_complex) {
  nlohmann::json header = {{"format", "salsa-qe"},
                           {"version", kQeFormatVersion},
                           {"sides", include_complex ? nlohmann::json{"simplified", "complex"}
                                                     : nlohmann::json{"simplified"}},
                           {"rating_range", {-3, 3}},
                           {"labels", {"QUALITY", "OK", "ERROR"}},
                           {"weights", weights.ToJson()}};
  std::string out = header.dump() + "\n";
  for (const AnnotatedPair &item : data) {
    const ScoreBreakdown score = sentence_score(item.pair, item.edits, weights, typology);
    nlohmann::json rec = SideRecord(item.pair, item.edits, Side::kSimplified);
    rec["pair_id"] = item.pair.id;
    rec["system"] = item.pair.system;
    rec["annotator"] = item.annotator;
    // Rendered with the fixed report precision so files are byte-stable.
    rec["sentence_score"] = std::stod(format_real(score.total));
    if (include_complex) rec["complex"] = SideRecord(item.pair, item.edits, Side::kComplex);
    out += rec.dump() + "\n";
  }
  return out;
}

}  // namespace salsa
