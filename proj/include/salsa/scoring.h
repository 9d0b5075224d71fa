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

#ifndef SALSA_SCORING_H_
#define SALSA_SCORING_H_

#include <array>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "salsa/typology.h"
#include "salsa/types.h"

namespace salsa {

enum class WeightProvenance { kDefault, kFitted, kManual };

std::string_view to_string(WeightProvenance p);
WeightProvenance parse_weight_provenance(std::string_view name);

// Signed weights keyed by (family, polarity) for the quality and error
// polarities. Keys are indexed polarity-major: conceptual/syntactic/lexical
// quality, then conceptual/syntactic/lexical error.
class WeightScheme {
 public:
  static constexpr std::size_t kNumKeys = 6;

  // Quality weights 1, error weights -1, syntactic error -5.
  static WeightScheme Default();
  static WeightScheme FromArray(const std::array<double, kNumKeys> &weights,
                                WeightProvenance provenance);

  static std::size_t key_index(Family family, Polarity polarity);
  static Family key_family(std::size_t index);
  static Polarity key_polarity(std::size_t index);
  // "conceptual/quality" etc.
  static std::string key_name(std::size_t index);

  // Weight for (family, polarity); trivial polarity weighs 0.
  double get(Family family, Polarity polarity) const;
  void set(Family family, Polarity polarity, double value);
  const std::array<double, kNumKeys> &values() const { return weights_; }

  WeightProvenance provenance() const { return provenance_; }
  void set_provenance(WeightProvenance p) { provenance_ = p; }

  // Keys whose sign disagrees with the convention (quality >= 0, error <= 0).
  std::vector<std::string> sign_warnings() const;

  // Default-provenance documents with wrong signs are rejected with
  // SchemaError; other provenances only carry warnings.
  static WeightScheme FromJson(const nlohmann::json &doc);
  nlohmann::json ToJson() const;

 private:
  std::array<double, kNumKeys> weights_{};
  WeightProvenance provenance_ = WeightProvenance::kManual;
};

struct EditContribution {
  std::string edit_id;
  double length_factor = 0.0;
  double contribution = 0.0;
  Family family = Family::kLexical;
  Polarity polarity = Polarity::kTrivial;
  int magnitude = 0;
};

struct ScoreBreakdown {
  double total = 0.0;
  // Indexed by Family.
  std::array<double, 3> by_family{};
  double quality = 0.0;
  double error = 0.0;
  std::vector<EditContribution> per_edit;
};

// exp((len(e_C) + len(e_S)) / (len(C) + len(S))) with code-point lengths.
// Throws InvalidInput for an edit with no span length.
double length_factor(const Edit &edit, const SentencePair &pair);

// +magnitude for quality, -magnitude for error, 0 for trivial.
int signed_rating(const Classification &classification);

// Sum over edits of length_factor * w(family, polarity) * magnitude.
// Throws ScoringError naming the first unclassified edit.
ScoreBreakdown sentence_score(const SentencePair &pair, const std::vector<Edit> &edits,
                              const WeightScheme &weights, const Typology &typology);

using FeatureRow = std::array<double, WeightScheme::kNumKeys>;

// Per-key sum of length_factor * magnitude over the sentence's edits.
FeatureRow score_features(const SentencePair &pair, const std::vector<Edit> &edits,
                          const Typology &typology);

struct FitSample {
  SentencePair pair;
  std::vector<Edit> edits;
  double gold = 0.0;
};

struct FitOptions {
  // Keys held at a given value; the remaining keys are fitted against the
  // residual target.
  std::map<std::size_t, double> fixed;
};

struct FitDiagnostics {
  double r_squared = 0.0;
  double residual_norm = 0.0;
  std::size_t sentences = 0;
  std::array<std::size_t, WeightScheme::kNumKeys> feature_counts{};
  // Zero for fixed keys.
  std::array<double, WeightScheme::kNumKeys> standard_errors{};
  std::vector<double> predictions;
  std::vector<std::string> warnings;
};

struct FitResult {
  WeightScheme weights;
  FitDiagnostics diagnostics;
};

// Ordinary least squares without intercept on the score features. Requires
// at least six sentences with edits and finite gold scores. A key that never
// occurs (and is not fixed) makes the system rank deficient: FitError lists
// those keys.
FitResult fit_weights(std::span<const FitSample> samples, const Typology &typology,
                      const FitOptions &options = {});

}  // namespace salsa

#endif  // SALSA_SCORING_H_
