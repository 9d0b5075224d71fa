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


// Acceptance gate: one PASS/FAIL line per primary criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "salsa/agreement.h"
#include "salsa/cli.h"
#include "salsa/error.h"
#include "salsa/json_io.h"
#include "salsa/qe_export.h"
#include "salsa/scoring.h"
#include "salsa/store.h"
#include "salsa/workflow.h"
#include "support/alpha_oracle.h"
#include "support/fixtures.h"

using namespace salsa;
using namespace salsa::testing;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string &what) {
    if (cond) return;
    if (pass) detail = what;
    pass = false;
  }
};

const Typology &T() { return Typology::Default(); }

std::string Fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// ---------------------------------------------------------------- scoring

Outcome ScoringArithmetic() {
  Outcome o;
  const Corpus corpus = corpus_from_json(read_json_file(data_path("scoring_corpus.json")));
  std::map<std::string, std::vector<Edit>> edits;
  for (const AnnotationRecord &r : annotations_from_json(read_json_file(data_path("scoring_annotations.json")))) {
    edits[r.pair_id] = r.edits;
  }
  const json expected = read_json_file(data_path("scoring_expected.json"))["totals"];
  o.require(corpus.pairs.size() == 10, "fixture does not hold 10 sentences");
  double worst = 0.0;
  for (const SentencePair &p : corpus.pairs) {
    const double got = sentence_score(p, edits[p.id], WeightScheme::Default(), T()).total;
    worst = std::max(worst, std::fabs(got - expected[p.id].get<double>()));
  }
  o.require(worst <= 1e-9, "max deviation " + Fmt(worst));
  const SentencePair p = make_pair("empty", "A sentence.", "A sentence.");
  o.require(sentence_score(p, {}, WeightScheme::Default(), T()).total == 0.0, "empty edit set is not exactly 0");
  if (o.pass) o.detail = "10 sentences, max |err| " + Fmt(worst);
  return o;
}

Outcome WeightRecovery() {
  Outcome o;
  const FitResult exact = fit_weights(planted_corpus(200, kPlantedWeights, 0.0, 1), T());
  double worst = 0.0;
  for (std::size_t k = 0; k < WeightScheme::kNumKeys; ++k) {
    worst = std::max(worst, std::fabs(exact.weights.values()[k] - kPlantedWeights[k]));
  }
  o.require(worst <= 1e-6, "noise-free deviation " + Fmt(worst));

  const FitResult noisy = fit_weights(planted_corpus(200, kPlantedWeights, 0.1, 2), T());
  double worst_z = 0.0;
  for (std::size_t k = 0; k < WeightScheme::kNumKeys; ++k) {
    const double se = noisy.diagnostics.standard_errors[k];
    const double z = std::fabs(noisy.weights.values()[k] - kPlantedWeights[k]) / se;
    worst_z = std::max(worst_z, z);
  }
  o.require(worst_z <= 3.0, "noisy fit off by " + Fmt(worst_z) + " SE");
  o.require(WeightScheme::Default().get(Family::kSyntactic, Polarity::kError) == -5.0,
            "syntactic error default is not -5");
  if (o.pass) o.detail = "noise-free max |err| " + Fmt(worst) + ", noisy max " + Fmt(worst_z) + " SE";
  return o;
}

// -------------------------------------------------------------- agreement

TokenLabelMatrix Matrix(const std::vector<std::vector<int>> &labels) {
  TokenLabelMatrix m;
  for (std::size_t c = 0; c < labels.size(); ++c) m.coders.push_back("c" + std::to_string(c));
  for (std::size_t u = 0; u < labels.front().size(); ++u) m.units.push_back("u" + std::to_string(u));
  int max_label = 0;
  for (const auto &row : labels) {
    for (int v : row) max_label = std::max(max_label, v);
  }
  for (int v = 1; v <= max_label; ++v) m.intern("L" + std::to_string(v));
  m.labels = labels;
  return m;
}

Outcome AgreementOracle() {
  Outcome o;
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> coders(2, 5), units(2, 40), kinds(2, 4), missing(0, 9);
  int compared = 0;
  double worst = 0.0;
  while (compared < 50) {
    const int c = coders(rng), u = units(rng), k = kinds(rng);
    std::uniform_int_distribution<int> value(0, k - 1);
    std::vector<std::vector<int>> labels(static_cast<std::size_t>(c), std::vector<int>(static_cast<std::size_t>(u)));
    for (auto &row : labels) {
      for (int &v : row) v = missing(rng) == 0 ? TokenLabelMatrix::kMissing : value(rng);
    }
    const auto expected = brute_force_alpha(labels);
    if (!expected) continue;
    const double alpha = krippendorff_alpha(Matrix(labels));
    o.require(std::isfinite(alpha), "non-finite alpha");
    worst = std::max(worst, std::fabs(alpha - *expected));
    ++compared;
  }
  o.require(worst <= 1e-9, "max deviation from oracle " + Fmt(worst));
  o.require(krippendorff_alpha(Matrix({{0, 1, 2, 1}, {0, 1, 2, 1}, {0, 1, 2, 1}})) == 1.0, "perfect agreement != 1");
  o.require(krippendorff_alpha(Matrix({{0, 1, -1}, {0, 1, 2}, {-1, 1, 2}})) == 1.0,
            "perfect agreement with gaps != 1");
  bool raised = false;
  try {
    const double v = krippendorff_alpha(Matrix({{1, 1, 1}, {1, 1, 1}}));
    o.require(!std::isnan(v), "single-label input produced NaN");
  } catch (const UndefinedStatistic &) {
    raised = true;
  }
  o.require(raised, "single-label input did not raise UndefinedStatistic");
  if (o.pass) o.detail = std::to_string(compared) + " matrices, max |err| " + Fmt(worst);
  return o;
}

// ---------------------------------------------------------------- qe

std::vector<Edit> RandomEdits(std::mt19937_64 &rng, const SentencePair &pair) {
  std::uniform_int_distribution<int> count(0, 6), rating(1, 3), kind(0, 6);
  std::vector<Edit> edits;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    const std::string id = "e" + std::to_string(i);
    const int k = kind(rng);
    if (k == 6) {
      edits.push_back(classified(
          make_edit(id, Operation::kInsertion, {random_span(rng, pair, Side::kSimplified)}, InfoChange::kSame),
          trivial()));
    } else {
      edits.push_back(edit_for_key(rng, pair, static_cast<std::size_t>(k), id, rating(rng)));
    }
  }
  return edits;
}

Outcome WordLevelConversion() {
  Outcome o;
  const SentencePair pair = make_pair("q", "The committee postponed the vote.", "The group delayed the vote.");
  auto sub = [&](std::string id, Classification c) {
    return classified(make_edit(std::move(id), Operation::kSubstitution,
                                {tok_span(pair, Side::kComplex, 1, 2), tok_span(pair, Side::kSimplified, 1, 2)},
                                InfoChange::kSame),
                      std::move(c));
  };
  const std::vector<Edit> worked = {sub("a", error({"complex_wording"}, 1)), sub("b", quality("paraphrase", 2))};
  o.require(word_ratings(pair, worked)[1] == 2, "worked example: -1 and +2 did not give +2");
  o.require(word_labels(pair, worked)[1] == WordLabel::kError, "label priority: quality+error did not give ERROR");

  std::mt19937_64 rng(17);
  int inconsistent_sets = 0, inconsistent_tokens = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const SentencePair p = make_pair("p", random_sentence(rng, 9), random_sentence(rng, 9));
    const auto edits = RandomEdits(rng, p);
    const auto ratings = word_ratings(p, edits);
    const auto labels = word_labels(p, edits);
    bool bad = false;
    for (std::size_t t = 0; t < ratings.size(); ++t) {
      const WordLabel want = ratings[t] < 0 ? WordLabel::kError : ratings[t] > 0 ? WordLabel::kQuality : WordLabel::kOk;
      if (labels[t] != want) {
        ++inconsistent_tokens;
        bad = true;
      }
    }
    inconsistent_sets += bad;
  }
  o.require(inconsistent_sets == 0, "rating/label invariant violated in " + std::to_string(inconsistent_sets) +
                                        "/1000 sets (" + std::to_string(inconsistent_tokens) +
                                        " tokens); the worked example itself has rating +2 with label ERROR");
  if (o.pass) o.detail = "1000 sets consistent";
  return o;
}

Outcome LossFormulas() {
  Outcome o;
  const std::vector<double> pred{0, 0}, gold{2, 0};
  const QeLosses l = qe_losses(0.0, 1.0, pred, gold, 0.1, 0.9);
  o.require(std::fabs(l.sentence - 0.5) <= 1e-12, "L_sent = " + Fmt(l.sentence));
  o.require(std::fabs(l.word - 1.0) <= 1e-12, "L_word = " + Fmt(l.word));
  o.require(std::fabs(l.combined - 0.95) <= 1e-12, "L = " + Fmt(l.combined));
  o.require(kFineTuneWordLossWeight == 0.9, "fine-tuning lambda_w is not 0.9");
  if (o.pass) o.detail = "L_sent 0.5, L_word 1, L 0.95";
  return o;
}

// ---------------------------------------------------------------- workflow

Outcome WorkflowSoundness() {
  Outcome o;
  const SentencePair pair = make_pair("p", "The cat sat on the mat.", "The cat sat.");
  auto del = [&](std::string id) {
    return make_edit(std::move(id), Operation::kDeletion, {tok_span(pair, Side::kComplex, 3, 5)}, InfoChange::kLess);
  };
  const std::vector<std::string> pool = {"a", "b", "c", "d", "e"};
  std::mt19937_64 rng(2025);
  std::uniform_int_distribution<std::size_t> who(0, pool.size() - 1);
  std::uniform_int_distribution<int> kind(0, 9), rev(1, 3), coin(0, 1);
  std::size_t accepted = 0, rejected = 0, completed = 0;
  for (int seq = 0; seq < 10000 && o.pass; ++seq) {
    WorkflowTask t;
    t.pair_id = "p";
    for (int step = 0; step < 60 && o.pass; ++step) {
      const json before = task_to_json(t);
      try {
        const int k = kind(rng);
        if (k == 0) {
          t = assign_annotators(t, {pool[who(rng)], pool[who(rng)], pool[who(rng)]});
        } else if (k == 1) {
          t = assign_adjudicator(t, pool[who(rng)]);
        } else if (k == 2) {
          t = start_classification(t);
        } else {
          const Stage stage = k < 6 ? Stage::kSelection : k < 7 ? Stage::kAdjudication : Stage::kClassification;
          std::string a = pool[who(rng)];
          if (coin(rng) && !t.assigned.empty()) a = t.assigned[who(rng) % t.assigned.size()];
          if (stage == Stage::kAdjudication && t.adjudicator && coin(rng)) a = *t.adjudicator;
          std::vector<Edit> edits;
          if (stage == Stage::kClassification) {
            if (t.adjudicated_edits) {
              for (const Edit &e : *t.adjudicated_edits) {
                if (coin(rng) || coin(rng)) edits.push_back(classified(e, trivial()));
              }
            }
            if (kind(rng) == 0) edits.push_back(classified(del("ghost"), trivial()));
          } else if (stage == Stage::kAdjudication) {
            edits.push_back(del("d1"));
            if (coin(rng)) edits.push_back(del("d2"));
          } else if (coin(rng)) {
            edits.push_back(del("s1"));
          }
          t = submit(record(a, "p", stage, edits, rev(rng)), t);
        }
        ++accepted;
      } catch (const Error &) {
        ++rejected;
        if (task_to_json(t) != before) o.require(false, "rejected event mutated the task");
      }
      const auto problems = check_invariants(t);
      if (!problems.empty()) o.require(false, "invalid state in sequence " + std::to_string(seq) + ": " + problems[0]);
    }
    completed += t.state == TaskState::kComplete;
  }
  o.require(completed > 0, "no sequence reached completion");

  // Hand-merged fixtures.
  const Edit d1 = del("d1");
  auto merge = [&](const std::vector<Classification> &votes) {
    std::vector<AnnotationRecord> records;
    for (std::size_t i = 0; i < votes.size(); ++i) {
      records.push_back(record("c" + std::to_string(i), "p", Stage::kClassification, {classified(d1, votes[i])}));
    }
    return *aggregate_classifications({d1}, records, T()).at(0).classification;
  };
  const Classification qqe = merge({quality("generalization", 1), quality("generalization", 2), error({"bad_deletion"}, 3)});
  o.require(qqe.polarity == Polarity::kQuality && qqe.rating == 2, "fixture q1,q2,e3 did not merge to quality 2");
  const Classification qet = merge({quality("generalization", 3), error({"bad_deletion"}, 1), trivial()});
  o.require(qet.polarity == Polarity::kError && qet.rating == 1, "fixture q3,e1,t did not merge to error 1");
  const Classification ee = merge({error({"coreference"}, 2), error({"coreference"}, 2), error({"bad_deletion"}, 3)});
  o.require(ee.error_types == std::set<std::string>{"coreference"} && ee.rating == 2,
            "fixture e2,e2,e3 did not merge to coreference 2");

  // Permutation invariance of aggregate_final.
  WorkflowTask t = assign_annotators(WorkflowTask{"p"}, {"a", "b", "c"});
  for (const char *a : {"a", "b", "c"}) t = submit(record(a, "p", Stage::kSelection, {d1}), t);
  t = assign_adjudicator(t, "j");
  t = submit(record("j", "p", Stage::kAdjudication, {d1, del("d2")}), t);
  t = start_classification(t);
  std::uniform_int_distribution<int> pol(0, 2), rating(1, 3);
  std::vector<AnnotationRecord> records;
  for (const char *a : {"a", "b", "c"}) {
    std::vector<Edit> edits;
    for (const Edit &e : *t.adjudicated_edits) {
      const int p = pol(rng);
      edits.push_back(classified(e, p == 0 ? quality("generalization", rating(rng))
                                    : p == 1 ? error({"bad_deletion"}, rating(rng))
                                             : trivial()));
    }
    records.push_back(record(a, "p", Stage::kClassification, edits));
    t = submit(records.back(), t);
  }
  const auto merged = aggregate_final(t, records, T());
  for (int trial = 0; trial < 100; ++trial) {
    std::shuffle(records.begin(), records.end(), rng);
    if (aggregate_final(t, records, T()) != merged) {
      o.require(false, "aggregate_final depends on record order");
      break;
    }
  }
  if (o.pass) {
    o.detail = "10000 sequences, " + std::to_string(accepted) + " accepted / " + std::to_string(rejected) +
               " rejected events, " + std::to_string(completed) + " completed";
  }
  return o;
}

// ---------------------------------------------------------------- round trip

std::set<std::string> RecordSet(const json &records) {
  std::set<std::string> out;
  for (const json &r : records) out.insert(r.dump());
  return out;
}

Outcome RoundTrip() {
  Outcome o;
  auto clock = [] { return std::string("2026-01-01T00:00:00Z"); };
  int files = 0;
  for (const std::string stem : {"scoring", "workflow"}) {
    const json corpus_doc = read_json_file(data_path(stem + "_corpus.json"));
    const json annotations_doc = read_json_file(data_path(stem + "_annotations.json"));
    TempDir dir;
    {
      Store store(dir.path(), T(), clock);
      store.import_document(corpus_doc);
      store.import_document(annotations_doc);
    }
    Store store(dir.path(), T(), clock);
    const json exported = store.export_dataset();
    o.require(exported["corpora"].size() == 1 && exported["corpora"][0] == corpus_doc, stem + " corpus changed");
    o.require(RecordSet(exported["records"]) == RecordSet(annotations_doc["records"]), stem + " records changed");
    TempDir again;
    Store copy(again.path(), T(), clock);
    copy.import_document(exported);
    o.require(copy.export_dataset() == exported, stem + " re-import differs");
    files += 2;
  }

  const auto src = [](const std::string &stem) {
    return std::vector<std::string>{"--corpus", data_path(stem + "_corpus.json").string(), "--annotations",
                                    data_path(stem + "_annotations.json").string()};
  };
  const std::vector<std::pair<std::vector<std::string>, std::string>> commands = {
      {{"score"}, "scoring"},
      {{"score", "--view", "aggregated"}, "workflow"},
      {{"agreement", "--expand-composites"}, "workflow"},
      {{"stats", "--edit-distance"}, "scoring"},
      {{"export-qe"}, "scoring"},
      {{"validate"}, "workflow"},
      {{"fit-weights", "--fix-unobserved"}, "scoring"},
  };
  for (const auto &[head, stem] : commands) {
    std::vector<std::string> args = head;
    for (const std::string &s : src(stem)) args.push_back(s);
    std::ostringstream out1, err1, out2, err2;
    const int c1 = cli::run(args, out1, err1);
    const int c2 = cli::run(args, out2, err2);
    o.require(c1 == 0 && c2 == 0, head[0] + " exited non-zero: " + err1.str());
    o.require(out1.str() == out2.str() && !out1.str().empty(), head[0] + " output not byte-stable");
  }
  if (o.pass) o.detail = std::to_string(files) + " files, " + std::to_string(commands.size()) + " CLI commands";
  return o;
}

struct Criterion {
  const char *name;
  double limit_s;  // 0 means no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"scoring-arithmetic", 1.0, ScoringArithmetic},
      {"weight-recovery", 5.0, WeightRecovery},
      {"agreement-oracle", 5.0, AgreementOracle},
      {"word-level-conversion", 0.0, WordLevelConversion},
      {"loss-formulas", 0.0, LossFormulas},
      {"workflow-soundness", 0.0, WorkflowSoundness},
      {"round-trip", 0.0, RoundTrip},
  };
  int failures = 0;
  for (const Criterion &c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0 && secs >= c.limit_s) {
      o.pass = false;
      o.detail += " (runtime " + Fmt(secs) + "s exceeds " + Fmt(c.limit_s) + "s)";
    }
    std::printf("%s %-22s %8.3fs  %s\n", o.pass ? "PASS" : "FAIL", c.name, secs, o.detail.c_str());
    failures += !o.pass;
  }
  std::printf("SKIP %-22s %8.3fs  released dataset not available offline\n", "dataset-reproduction", 0.0);
  return failures == 0 ? 0 : 1;
}
