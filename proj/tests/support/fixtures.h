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

#ifndef SALSA_TESTS_FIXTURES_H_
#define SALSA_TESTS_FIXTURES_H_

#include <array>
#include <filesystem>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "salsa/annotation.h"
#include "salsa/scoring.h"
#include "salsa/tokenizer.h"
#include "salsa/types.h"

#ifndef SALSA_TEST_DATA_DIR
#define SALSA_TEST_DATA_DIR "tests/data"
#endif

namespace salsa::testing {

inline std::filesystem::path data_path(const std::string &name) {
  return std::filesystem::path(SALSA_TEST_DATA_DIR) / name;
}

inline SentencePair make_pair(std::string id, const std::string &complex, const std::string &simplified,
                              std::string system = "sys") {
  SentencePair p;
  p.complex = tokenize(complex, Side::kComplex, id + ":C");
  p.simplified = tokenize(simplified, Side::kSimplified, id + ":S");
  p.id = std::move(id);
  p.system = std::move(system);
  return p;
}

// Character span over tokens [first, last] of one side.
inline SpanRange tok_span(const SentencePair &pair, Side side, std::size_t first, std::size_t last) {
  const TokenizedSentence &s = pair.side(side);
  return {side, s.tokens.at(first).start, s.tokens.at(last).end};
}

inline Edit make_edit(std::string id, Operation op, std::vector<SpanRange> spans,
                      std::optional<InfoChange> info = std::nullopt) {
  Edit e;
  e.id = std::move(id);
  e.operation = op;
  e.spans = std::move(spans);
  e.information_change = info;
  if (op == Operation::kReorder) e.reorder_level = ReorderLevel::kWord;
  return e;
}

inline Classification quality(std::string type, int rating) {
  Classification c;
  c.polarity = Polarity::kQuality;
  c.quality_type = std::move(type);
  c.rating = rating;
  return c;
}

inline Classification error(std::set<std::string> types, int rating) {
  Classification c;
  c.polarity = Polarity::kError;
  c.error_types = std::move(types);
  c.rating = rating;
  return c;
}

inline Classification trivial() { return Classification{}; }

inline Edit classified(Edit e, Classification c) {
  e.classification = std::move(c);
  return e;
}

inline AnnotationRecord record(std::string annotator, std::string pair_id, Stage stage, std::vector<Edit> edits,
                               std::int64_t revision = 1) {
  AnnotationRecord r;
  r.annotator = std::move(annotator);
  r.pair_id = std::move(pair_id);
  r.stage = stage;
  r.edits = std::move(edits);
  r.revision = revision;
  r.submitted_at = "2026-01-01T00:00:00Z";
  return r;
}

// Random sentence of `words` tokens drawn from a small vocabulary, ending in
// a period.
inline std::string random_sentence(std::mt19937_64 &rng, std::size_t words) {
  static const char *const kVocab[] = {"the", "cat", "sat", "on", "a", "mat", "while", "river",
                                       "stone", "quickly", "old", "house", "green", "light", "moved"};
  std::uniform_int_distribution<std::size_t> pick(0, std::size(kVocab) - 1);
  std::string out;
  for (std::size_t i = 0; i < words; ++i) {
    if (i) out += ' ';
    out += kVocab[pick(rng)];
  }
  return out + ".";
}

inline SpanRange random_span(std::mt19937_64 &rng, const SentencePair &pair, Side side, std::size_t max_tokens = 3) {
  const std::size_t n = pair.side(side).tokens.size();
  std::uniform_int_distribution<std::size_t> first_d(0, n - 1);
  const std::size_t first = first_d(rng);
  std::uniform_int_distribution<std::size_t> len_d(1, std::min(max_tokens, n - first));
  return tok_span(pair, side, first, first + len_d(rng) - 1);
}

// Classified edit whose (family, polarity) is weight key `key`.
inline Edit edit_for_key(std::mt19937_64 &rng, const SentencePair &pair, std::size_t key, std::string id,
                         int rating) {
  switch (key) {
    case 0:
      return classified(make_edit(id, Operation::kInsertion, {random_span(rng, pair, Side::kSimplified)},
                                  InfoChange::kMore),
                        quality("elaboration", rating));
    case 1:
      return classified(make_edit(id, Operation::kReorder,
                                  {random_span(rng, pair, Side::kComplex), random_span(rng, pair, Side::kSimplified)},
                                  InfoChange::kSame),
                        quality("word_reorder", rating));
    case 2:
      return classified(make_edit(id, Operation::kSubstitution,
                                  {random_span(rng, pair, Side::kComplex), random_span(rng, pair, Side::kSimplified)},
                                  InfoChange::kSame),
                        quality("paraphrase", rating));
    case 3:
      return classified(make_edit(id, Operation::kDeletion, {random_span(rng, pair, Side::kComplex)},
                                  InfoChange::kLess),
                        error({"bad_deletion"}, rating));
    case 4:
      return classified(make_edit(id, Operation::kReorder,
                                  {random_span(rng, pair, Side::kComplex), random_span(rng, pair, Side::kSimplified)},
                                  InfoChange::kSame),
                        error({"bad_word_reorder"}, rating));
    default:
      return classified(make_edit(id, Operation::kSubstitution,
                                  {random_span(rng, pair, Side::kComplex), random_span(rng, pair, Side::kSimplified)},
                                  InfoChange::kSame),
                        error({"complex_wording"}, rating));
  }
}

inline constexpr std::array<double, WeightScheme::kNumKeys> kPlantedWeights = {2.0, 1.0, 3.0, -1.0, -5.0, -0.5};

// Synthetic corpus whose gold scores follow the score equation under
// `weights` plus Gaussian noise. Every key occurs in most sentences.
inline std::vector<FitSample> planted_corpus(std::size_t sentences, const std::array<double, 6> &weights,
                                             double noise_sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, noise_sigma > 0 ? noise_sigma : 1.0);
  std::uniform_int_distribution<int> rating(1, 3);
  std::uniform_int_distribution<std::size_t> words(8, 20);
  std::bernoulli_distribution include(0.7);
  std::vector<FitSample> out;
  for (std::size_t i = 0; i < sentences; ++i) {
    FitSample s;
    s.pair = make_pair("syn-" + std::to_string(i), random_sentence(rng, words(rng)), random_sentence(rng, words(rng)));
    for (std::size_t key = 0; key < WeightScheme::kNumKeys; ++key) {
      if (!include(rng)) continue;
      s.edits.push_back(edit_for_key(rng, s.pair, key, "e" + std::to_string(key), rating(rng)));
    }
    if (s.edits.empty()) s.edits.push_back(edit_for_key(rng, s.pair, i % 6, "e", rating(rng)));
    double gold = 0.0;
    for (const Edit &e : s.edits) {
      const std::size_t key = WeightScheme::key_index(
          e.classification->polarity == Polarity::kQuality
              ? (e.classification->quality_type == "elaboration" ? Family::kConceptual
                 : e.classification->quality_type == "word_reorder" ? Family::kSyntactic
                                                                     : Family::kLexical)
              : (e.classification->error_types.count("bad_deletion") ? Family::kConceptual
                 : e.classification->error_types.count("bad_word_reorder") ? Family::kSyntactic
                                                                            : Family::kLexical),
          e.classification->polarity);
      gold += length_factor(e, s.pair) * weights[key] * e.classification->rating;
    }
    if (noise_sigma > 0) gold += noise(rng);
    s.gold = gold;
    out.push_back(std::move(s));
  }
  return out;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("salsa-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace salsa::testing

#endif  // SALSA_TESTS_FIXTURES_H_
