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

#include <cmath>
#include <random>

#include "doctest.h"
#include "salsa/error.h"
#include "salsa/json_io.h"
#include "salsa/scoring.h"
#include "support/fixtures.h"
#include "support/normal_equations.h"

using namespace salsa;
using namespace salsa::testing;

namespace {

const Typology &T() { return Typology::Default(); }

std::map<std::string, std::vector<Edit>> EditsByPair(const std::vector<AnnotationRecord> &records) {
  std::map<std::string, std::vector<Edit>> out;
  for (const AnnotationRecord &r : records) out[r.pair_id] = r.edits;
  return out;
}

}  // namespace

TEST_SUITE("length_factor") {
  TEST_CASE("edit covering both sentences entirely") {
    const SentencePair p = make_pair("p", "abcd", "ab");
    const Edit e = make_edit("e", Operation::kSubstitution, {{Side::kComplex, 0, 4}, {Side::kSimplified, 0, 2}});
    CHECK(length_factor(e, p) == doctest::Approx(2.718281828).epsilon(1e-9));
    CHECK(std::fabs(length_factor(e, p) - std::exp(1.0)) < 1e-15);
  }

  TEST_CASE("deletion of 3 of 10 complex characters") {
    const SentencePair p = make_pair("p", "abc defghi", "abcdefghij");
    const Edit e = make_edit("e", Operation::kDeletion, {{Side::kComplex, 0, 3}});
    CHECK(std::fabs(length_factor(e, p) - std::exp(3.0 / 20.0)) < 1e-15);
    CHECK(std::fabs(length_factor(e, p) - 1.161834) < 1e-6);
  }

  TEST_CASE("disjoint spans are summed") {
    const SentencePair p = make_pair("p", "ab cde fghijklmnopqr", "abcdefghijklmnopqrst");
    REQUIRE(p.complex.length == 20);
    const Edit e = make_edit("e", Operation::kDeletion, {{Side::kComplex, 0, 2}, {Side::kComplex, 3, 6}});
    CHECK(std::fabs(length_factor(e, p) - std::exp(5.0 / 40.0)) < 1e-15);
  }

  TEST_CASE("zero-length edit is rejected") {
    const SentencePair p = make_pair("p", "abc", "abc");
    const Edit e = make_edit("e", Operation::kDeletion, {});
    CHECK_THROWS_AS(length_factor(e, p), InvalidInput);
  }

  TEST_CASE("monotone and bounded") {
    const SentencePair p = make_pair("p", "one two three four five six", "seven eight nine");
    double prev = 1.0;
    for (std::size_t last = 0; last < p.complex.tokens.size(); ++last) {
      const Edit e = make_edit("e", Operation::kDeletion, {tok_span(p, Side::kComplex, 0, last)});
      const double f = length_factor(e, p);
      CHECK(f > 1.0);
      CHECK(f <= std::exp(1.0));
      CHECK(f >= prev);
      prev = f;
    }
  }
}

TEST_SUITE("signed_rating") {
  TEST_CASE("sign convention") {
    CHECK(signed_rating(quality("paraphrase", 3)) == 3);
    CHECK(signed_rating(error({"bad_deletion"}, 1)) == -1);
    CHECK(signed_rating(trivial()) == 0);
  }
}

TEST_SUITE("sentence_score") {
  TEST_CASE("empty edit set scores exactly zero") {
    const SentencePair p = make_pair("p", "Same.", "Same.");
    const ScoreBreakdown b = sentence_score(p, {}, WeightScheme::Default(), T());
    CHECK(b.total == 0.0);
    CHECK(b.quality == 0.0);
    CHECK(b.error == 0.0);
    for (double v : b.by_family) CHECK(v == 0.0);
  }

  TEST_CASE("full-sentence paraphrase rated 2") {
    const SentencePair p = make_pair("p", "big", "large");
    const Edit e = classified(make_edit("e", Operation::kSubstitution, {{Side::kComplex, 0, 3}, {Side::kSimplified, 0, 5}},
                                        InfoChange::kSame),
                              quality("paraphrase", 2));
    const ScoreBreakdown b = sentence_score(p, {e}, WeightScheme::Default(), T());
    CHECK(std::fabs(b.total - 2.0 * std::exp(1.0)) < 1e-12);
    CHECK(std::fabs(b.total - 5.436564) < 1e-6);
  }

  TEST_CASE("syntactic error weighs -5") {
    CHECK(WeightScheme::Default().get(Family::kSyntactic, Polarity::kError) == -5.0);
    const SentencePair p = make_pair("p", "Quickly the fox jumped.", "The fox jumped quickly.");
    const Edit e = classified(make_edit("e", Operation::kReorder,
                                        {tok_span(p, Side::kComplex, 0, 0), tok_span(p, Side::kSimplified, 3, 3)},
                                        InfoChange::kSame),
                              error({"bad_word_reorder"}, 1));
    const double f = length_factor(e, p);
    const ScoreBreakdown b = sentence_score(p, {e}, WeightScheme::Default(), T());
    CHECK(std::fabs(b.total - (-5.0 * f)) < 1e-12);
    CHECK(b.per_edit.at(0).contribution == doctest::Approx(-5.0 * f));
  }

  TEST_CASE("unclassified edit is named in the error") {
    const SentencePair p = make_pair("p", "a b", "a");
    const Edit e = make_edit("lonely", Operation::kDeletion, {tok_span(p, Side::kComplex, 1, 1)}, InfoChange::kLess);
    try {
      sentence_score(p, {e}, WeightScheme::Default(), T());
      FAIL("expected ScoringError");
    } catch (const ScoringError &ex) {
      CHECK(std::string(ex.what()).find("lonely") != std::string::npos);
    }
  }

  TEST_CASE("ten-sentence fixture matches independently computed totals") {
    const Corpus corpus = corpus_from_json(read_json_file(data_path("scoring_corpus.json")));
    const auto edits = EditsByPair(annotations_from_json(read_json_file(data_path("scoring_annotations.json"))));
    const json expected = read_json_file(data_path("scoring_expected.json"));
    REQUIRE(corpus.pairs.size() == 10);
    for (const SentencePair &p : corpus.pairs) {
      CAPTURE(p.id);
      const ScoreBreakdown b = sentence_score(p, edits.at(p.id), WeightScheme::Default(), T());
      CHECK(std::fabs(b.total - expected["totals"][p.id].get<double>()) < 1e-9);
    }
  }

  TEST_CASE("breakdown partitions the total") {
    const Corpus corpus = corpus_from_json(read_json_file(data_path("scoring_corpus.json")));
    const auto edits = EditsByPair(annotations_from_json(read_json_file(data_path("scoring_annotations.json"))));
    for (const SentencePair &p : corpus.pairs) {
      const ScoreBreakdown b = sentence_score(p, edits.at(p.id), WeightScheme::Default(), T());
      double per_edit = 0.0;
      for (const EditContribution &c : b.per_edit) per_edit += c.contribution;
      CHECK(std::fabs(per_edit - b.total) < 1e-9);
      CHECK(std::fabs(b.by_family[0] + b.by_family[1] + b.by_family[2] - b.total) < 1e-9);
      CHECK(std::fabs(b.quality + b.error - b.total) < 1e-9);
      CHECK(b.quality >= 0.0);
      CHECK(b.error <= 0.0);
    }
  }

  TEST_CASE("trivial edits and the grammar flag do not move the score") {
    const SentencePair p = make_pair("p", "The old man walked.", "The man walked.");
    Edit t = classified(make_edit("t", Operation::kDeletion, {tok_span(p, Side::kComplex, 1, 1)}, InfoChange::kSame),
                        trivial());
    CHECK(sentence_score(p, {t}, WeightScheme::Default(), T()).total == 0.0);
    Edit g = classified(make_edit("g", Operation::kDeletion, {tok_span(p, Side::kComplex, 1, 1)}, InfoChange::kLess),
                        quality("generalization", 2));
    const double plain = sentence_score(p, {g}, WeightScheme::Default(), T()).total;
    g.classification->grammar_error = true;
    CHECK(sentence_score(p, {g}, WeightScheme::Default(), T()).total == plain);
  }
}

TEST_SUITE("score properties") {
  TEST_CASE("scale equivariance, additivity, error-removal monotonicity") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> scale(-3.0, 3.0);
    std::uniform_int_distribution<int> rating(1, 3);
    std::uniform_int_distribution<std::size_t> key(0, 5);
    const WeightScheme base = WeightScheme::FromArray(kPlantedWeights, WeightProvenance::kManual);
    for (int trial = 0; trial < 200; ++trial) {
      const SentencePair p = make_pair("p", random_sentence(rng, 12), random_sentence(rng, 9));
      std::vector<Edit> a, b;
      for (int i = 0; i < 4; ++i) a.push_back(edit_for_key(rng, p, key(rng), "a" + std::to_string(i), rating(rng)));
      for (int i = 0; i < 3; ++i) b.push_back(edit_for_key(rng, p, key(rng), "b" + std::to_string(i), rating(rng)));

      const double c = scale(rng);
      std::array<double, 6> scaled = base.values();
      for (double &w : scaled) w *= c;
      const double total = sentence_score(p, a, base, T()).total;
      CHECK(sentence_score(p, a, WeightScheme::FromArray(scaled, WeightProvenance::kManual), T()).total ==
            doctest::Approx(c * total).epsilon(1e-12));

      std::vector<Edit> both = a;
      both.insert(both.end(), b.begin(), b.end());
      CHECK(std::fabs(sentence_score(p, both, base, T()).total - total - sentence_score(p, b, base, T()).total) < 1e-9);

      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].classification->polarity != Polarity::kError) continue;
        std::vector<Edit> without = a;
        without.erase(without.begin() + static_cast<std::ptrdiff_t>(i));
        CHECK(sentence_score(p, without, base, T()).total >= total - 1e-12);
      }
    }
  }
}

TEST_SUITE("weights") {
  TEST_CASE("default scheme") {
    const WeightScheme w = WeightScheme::Default();
    CHECK(w.values() == std::array<double, 6>{1, 1, 1, -1, -5, -1});
    CHECK(w.provenance() == WeightProvenance::kDefault);
    CHECK(w.sign_warnings().empty());
  }

  TEST_CASE("JSON round trip and sign handling") {
    const WeightScheme w = WeightScheme::FromArray(kPlantedWeights, WeightProvenance::kFitted);
    const WeightScheme back = WeightScheme::FromJson(w.ToJson());
    CHECK(back.values() == w.values());
    CHECK(back.provenance() == WeightProvenance::kFitted);

    json bad = WeightScheme::Default().ToJson();
    bad["weights"]["lexical"]["error"] = 0.5;
    CHECK_THROWS_AS(WeightScheme::FromJson(bad), SchemaError);
    bad["provenance"] = "fitted";
    const WeightScheme fitted = WeightScheme::FromJson(bad);
    CHECK(fitted.sign_warnings().size() == 1);

    json missing = WeightScheme::Default().ToJson();
    missing["weights"]["syntactic"].erase("quality");
    CHECK_THROWS_AS(WeightScheme::FromJson(missing), SchemaError);
  }
}

TEST_SUITE("fit_weights") {
  TEST_CASE("noise-free planted weights are recovered") {
    const auto samples = planted_corpus(200, kPlantedWeights, 0.0, 1);
    const FitResult fit = fit_weights(samples, T());
    for (std::size_t k = 0; k < 6; ++k) {
      CAPTURE(k);
      CHECK(std::fabs(fit.weights.values()[k] - kPlantedWeights[k]) < 1e-6);
    }
    CHECK(fit.diagnostics.r_squared == doctest::Approx(1.0));
    CHECK(fit.diagnostics.residual_norm < 1e-8);
    CHECK(fit.weights.provenance() == WeightProvenance::kFitted);
  }

  TEST_CASE("noisy recovery agrees with the normal-equations oracle and lies within 3 SE") {
    const auto samples = planted_corpus(200, kPlantedWeights, 0.1, 2);
    const FitResult fit = fit_weights(samples, T());
    Matrix x;
    std::vector<double> y;
    for (const FitSample &s : samples) {
      const FeatureRow row = score_features(s.pair, s.edits, T());
      x.emplace_back(row.begin(), row.end());
      y.push_back(s.gold);
    }
    const auto oracle = solve_normal_equations(x, y);
    REQUIRE(oracle);
    for (std::size_t k = 0; k < 6; ++k) {
      CAPTURE(k);
      CHECK(std::fabs(fit.weights.values()[k] - oracle->coefficients[k]) < 1e-8);
      CHECK(std::fabs(fit.diagnostics.standard_errors[k] - oracle->standard_errors[k]) < 1e-8);
      CHECK(std::fabs(fit.weights.values()[k] - kPlantedWeights[k]) <= 3.0 * fit.diagnostics.standard_errors[k]);
    }
  }

  TEST_CASE("scoring reproduces the regression predictions") {
    const auto samples = planted_corpus(60, kPlantedWeights, 0.3, 3);
    const FitResult fit = fit_weights(samples, T());
    REQUIRE(fit.diagnostics.predictions.size() == samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double scored = sentence_score(samples[i].pair, samples[i].edits, fit.weights, T()).total;
      CHECK(std::fabs(scored - fit.diagnostics.predictions[i]) < 1e-9);
    }
  }

  TEST_CASE("unobserved key is reported, fixing it allows a fit") {
    auto samples = planted_corpus(80, kPlantedWeights, 0.0, 4);
    for (FitSample &s : samples) {
      std::erase_if(s.edits, [](const Edit &e) { return e.classification->error_types.count("bad_deletion"); });
      if (s.edits.empty()) s.edits.push_back(classified(
          make_edit("z", Operation::kSubstitution, {tok_span(s.pair, Side::kComplex, 0, 0), tok_span(s.pair, Side::kSimplified, 0, 0)},
                    InfoChange::kSame),
          quality("paraphrase", 1)));
      double gold = 0.0;
      for (const Edit &e : s.edits) {
        const std::size_t k = WeightScheme::key_index(T().family_of(e), e.classification->polarity);
        gold += length_factor(e, s.pair) * kPlantedWeights[k] * e.classification->rating;
      }
      s.gold = gold;
    }
    try {
      fit_weights(samples, T());
      FAIL("expected FitError");
    } catch (const FitError &e) {
      CHECK(std::string(e.what()).find("conceptual/error") != std::string::npos);
    }
    FitOptions options;
    options.fixed[WeightScheme::key_index(Family::kConceptual, Polarity::kError)] = -1.0;
    const FitResult fit = fit_weights(samples, T(), options);
    CHECK(fit.weights.get(Family::kConceptual, Polarity::kError) == -1.0);
    CHECK(fit.weights.get(Family::kSyntactic, Polarity::kError) == doctest::Approx(-5.0).epsilon(1e-9));
  }

  TEST_CASE("input requirements") {
    auto samples = planted_corpus(5, kPlantedWeights, 0.0, 5);
    CHECK_THROWS_AS(fit_weights(samples, T()), FitError);
    samples = planted_corpus(20, kPlantedWeights, 0.0, 6);
    samples[3].gold = std::nan("");
    CHECK_THROWS_AS(fit_weights(samples, T()), FitError);
  }
}
