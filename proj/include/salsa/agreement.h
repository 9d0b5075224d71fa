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

#ifndef SALSA_AGREEMENT_H_
#define SALSA_AGREEMENT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "salsa/annotation.h"
#include "salsa/typology.h"
#include "salsa/types.h"

namespace salsa {

// An operation, optionally narrowed to one information change
// ("substitution:same").
struct EditClass {
  Operation operation = Operation::kDeletion;
  std::optional<InfoChange> information_change;

  std::string name() const;
  bool matches(const Edit &edit) const;
  static EditClass Parse(std::string_view name);
};

// The rows reported by default: each operation, with substitution also
// broken down by information change.
std::vector<EditClass> default_edit_classes();

// Nominal labels per (coder, unit). Label 0 is always "NONE".
struct TokenLabelMatrix {
  static constexpr int kMissing = -1;
  static constexpr int kNone = 0;

  std::vector<std::string> units;
  std::vector<std::string> coders;
  std::vector<std::string> label_names{"NONE"};
  // labels[coder][unit]
  std::vector<std::vector<int>> labels;

  int intern(const std::string &label);
};

// Keeps the highest revision per (annotator, pair, stage).
std::vector<AnnotationRecord> latest_records(const std::vector<AnnotationRecord> &records);

// Binary IN/NONE labeling of every complex and simplified token of every
// pair for one edit class. Coders without a record for a pair are missing
// on that pair's units. With expand_composites, split and structure edits
// are replaced by their constituents before matching. Throws InvalidInput
// when a record names an unknown pair or an annotator appears twice on a
// pair.
TokenLabelMatrix build_matrix(const std::vector<AnnotationRecord> &records,
                              const std::vector<SentencePair> &pairs,
                              const EditClass &edit_class, bool expand_composites);

// Multi-class variant: a token's label is the "+"-joined set of operations
// covering it, or NONE.
TokenLabelMatrix build_pooled_matrix(const std::vector<AnnotationRecord> &records,
                                     const std::vector<SentencePair> &pairs,
                                     bool expand_composites);

// Nominal Krippendorff's alpha from the coincidence matrix. Units with fewer
// than two labels are ignored. Throws UndefinedStatistic when nothing is
// pairable or expected disagreement is zero.
double krippendorff_alpha(const TokenLabelMatrix &matrix);

struct PairwiseAgreement {
  // Over units where some coder gave a non-NONE label.
  double pct_at_least_two = 0.0;
  double pct_all = 0.0;
  std::size_t units = 0;
  // at_least[k-1]: fraction of those units where >= k coders share a
  // non-NONE label.
  std::vector<double> at_least;
};

// Throws UndefinedStatistic when no unit has a non-NONE label.
PairwiseAgreement pairwise_agreement(const TokenLabelMatrix &matrix);

struct ConfusionMatrix {
  // Operation names followed by "NONE".
  std::vector<std::string> labels;
  // counts[majority][minority]
  std::vector<std::vector<std::size_t>> counts;
  std::size_t no_majority = 0;
  std::size_t majority_tokens = 0;

  std::size_t total() const;
};

// Token-level confusion among three coders. Each coder's token label is the
// highest-priority operation covering it (structure, split, reorder,
// substitution, deletion, insertion) or NONE. Unanimous tokens add 1 to the
// diagonal; 2-1 tokens add 1 to (majority, minority); three-way splits are
// tallied in no_majority. Tokens nobody labeled are skipped. Throws
// InvalidInput for a pair annotated by a number of coders other than 3.
ConfusionMatrix confusion(const std::vector<AnnotationRecord> &records,
                          const std::vector<SentencePair> &pairs, bool expand_composites);

struct ErrorPresence {
  std::string type_id;
  // Fraction of pairs where a strict majority of coders mark the error.
  double frequency = 0.0;
  std::optional<double> alpha;
  std::string alpha_note;
};

// Per catalog error type (and the grammar flag): unit = pair, label =
// whether the coder's classification record contains the error.
std::vector<ErrorPresence> error_presence_agreement(
    const std::vector<AnnotationRecord> &classification_records,
    const std::vector<SentencePair> &pairs, const Typology &typology);

struct AgreementRow {
  std::string edit_class;
  std::optional<double> alpha;
  std::optional<double> pct_two;
  std::optional<double> pct_three;
  std::size_t selected_units = 0;
  std::string note;
};

// One row per class; undefined statistics are left empty with a note.
std::vector<AgreementRow> agreement_table(const std::vector<AnnotationRecord> &records,
                                          const std::vector<SentencePair> &pairs,
                                          const std::vector<EditClass> &classes,
                                          bool expand_composites);

}  // namespace salsa

#endif  // SALSA_AGREEMENT_H_
