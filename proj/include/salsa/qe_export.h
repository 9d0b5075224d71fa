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

#ifndef SALSA_QE_EXPORT_H_
#define SALSA_QE_EXPORT_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "salsa/annotation.h"
#include "salsa/scoring.h"
#include "salsa/typology.h"
#include "salsa/types.h"

namespace salsa {

enum class WordLabel { kQuality, kOk, kError };

std::string_view to_string(WordLabel label);

// Word-level rating per token of `side`: the signed rating of the covering
// edit with the largest magnitude; an error wins a magnitude tie; uncovered
// tokens get 0. Throws InvalidInput for an unclassified edit.
std::vector<int> word_ratings(const SentencePair &pair, const std::vector<Edit> &edits,
                              Side side = Side::kSimplified);

// ERROR if any error edit covers the token, else QUALITY if any quality edit
// does, else OK. Trivial-only coverage is OK.
std::vector<WordLabel> word_labels(const SentencePair &pair, const std::vector<Edit> &edits,
                                   Side side = Side::kSimplified);

// Word weight used for fine-tuning; pre-training uses lambda_s = 1,
// lambda_w = 0.
inline constexpr double kFineTuneWordLossWeight = 0.9;

struct QeLosses {
  double sentence = 0.0;
  double word = 0.0;
  double combined = 0.0;
};

// sentence = (y - y_hat)^2 / 2, word = mean over words of (y_i - y_hat_i)^2 / 2,
// combined = lambda_s * sentence + lambda_w * word. Throws InvalidInput on
// empty or mismatched word lists or negative weights.
QeLosses qe_losses(double pred_sentence, double gold_sentence, std::span<const double> pred_words,
                   std::span<const double> gold_words, double lambda_s, double lambda_w);

inline constexpr int kQeFormatVersion = 1;

// JSON Lines: a header record followed by one record per annotated pair
// with token strings, ratings, labels and the sentence score.
std::string export_qe_jsonl(const std::vector<AnnotatedPair> &data, const WeightScheme &weights,
                            const Typology &typology, bool include_complex = false);

}  // namespace salsa

#endif  // SALSA_QE_EXPORT_H_
