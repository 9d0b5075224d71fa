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

#include "salsa/agreement.h"

#include <algorithm>
#include <map>
#include <set>

#include "salsa/edit.h"
#include "salsa/error.h"

namespace salsa {

std::string EditClass::name() const {
  std::string out(to_string(operation));
  if (information_change) out += ":" + std::string(to_string(*information_change));
  return out;
}

bool EditClass::matches(const Edit &edit) const {
  if (edit.operation != operation) return false;
  return !information_change || edit.information_change == information_change;
}

EditClass EditClass::Parse(std::string_view name) {
  EditClass c;
  const auto colon = name.find(':');
  c.operation = parse_operation(name.substr(0, colon));
  if (colon != std::string_view::npos) c.information_change = parse_info_change(name.substr(colon + 1));
  return c;
}

std::vector<EditClass> default_edit_classes() {
  return {{Operation::kDeletion, std::nullopt},
          {Operation::kInsertion, std::nullopt},
          {Operation::kSubstitution, std::nullopt},
          {Operation::kSubstitution, InfoChange::kLess},
          {Operation::kSubstitution, InfoChange::kSame},
          {Operation::kSubstitution, InfoChange::kMore},
          {Operation::kSubstitution, InfoChange::kDifferent},
          {Operation::kReorder, std::nullopt},
          {Operation::kStructure, std::nullopt},
          {Operation::kSplit, std::nullopt}};
}

int TokenLabelMatrix::intern(const std::string &label) {
  auto it = std::find(label_names.begin(), label_names.end(), label);
  if (it != label_names.end()) return static_cast<int>(it - label_names.begin());
  label_names.push_back(label);
  return static_cast<int>(label_names.size() - 1);
}

std::vector<AnnotationRecord> latest_records(const std::vector<AnnotationRecord> &records) {
  std::map<std::tuple<std::string, std::string, Stage>, const AnnotationRecord *> best;
  for (const AnnotationRecord &r : records) {
    auto &slot = best[{r.annotator, r.pair_id, r.stage}];
    if (slot == nullptr || r.revision > slot->revision) slot = &r;
  }
  std::vector<AnnotationRecord> out;
  for (const auto &[key, r] : best) out.push_back(*r);
  return out;
}

namespace {

// Leaf edits used for token labeling.
void Leaves(const Edit &edit, bool expand, std::vector<const Edit *> &out) {
  if (expand && is_composite(edit.operation) && !edit.constituents.empty()) {
    for (const Edit &c : edit.constituents) Leaves(c, expand, out);
    return;
  }
  out.push_back(&edit);
}

struct Layout {
  std::vector<std::string> coders;
  std::map<std::string, std::size_t> coder_index;
  std::map<std::string, std::size_t> pair_index;
  std::vector<std::size_t> unit_offset;  // first unit of each pair
  std::vector<std::string> units;
  // records_by[pair][coder] -> record
  std::vector<std::vector<const AnnotationRecord *>> records_by;
};

Layout MakeLayout(const std::vector<AnnotationRecord> &records,
                  const std::vector<SentencePair> &pairs) {
  Layout l;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    l.pair_index[pairs[p].id] = p;
    l.unit_offset.push_back(l.units.size());
    for (std::size_t t = 0; t < pairs[p].complex.tokens.size(); ++t) {
      l.units.push_back(pairs[p].id + "/C/" + std::to_string(t));
    }
    for (std::size_t t = 0; t < pairs[p].simplified.tokens.size(); ++t) {
      l.units.push_back(pairs[p].id + "/S/" + std::to_string(t));
    }
  }
  std::set<std::string> coder_set;
  for (const AnnotationRecord &r : records) {
    if (!l.pair_index.count(r.pair_id)) {
      throw InvalidInput("annotation by '" + r.annotator + "' references unknown pair '" +
                         r.pair_id + "'");
    }
    coder_set.insert(r.annotator);
  }
  l.coders.assign(coder_set.begin(), coder_set.end());
  for (std::size_t c = 0; c < l.coders.size(); ++c) l.coder_index[l.coders[c]] = c;
  l.records_by.assign(pairs.size(), std::vector<const AnnotationRecord *>(l.coders.size(), nullptr));
  for (const AnnotationRecord &r : records) {
    auto &slot = l.records_by[l.pair_index[r.pair_id]][l.coder_index[r.annotator]];
    if (slot != nullptr) {
      throw InvalidInput("annotator '" + r.annotator + "' appears twice on pair '" + r.pair_id + "'");
    }
    slot = &r;
  }
  return l;
}

// Calls fn(unit index, edit) for every token covered by a leaf edit.
template <typename Fn>
void ForEachCoveredUnit(const Layout &l, const SentencePair &pair, std::size_t p,
                        const AnnotationRecord &record, bool expand, Fn fn) {
  const std::size_t complex_n = pair.complex.tokens.size();
  for (const Edit &top : record.edits) {
    std::vector<const Edit *> leaves;
    Leaves(top, expand, leaves);
    for (const Edit *leaf : leaves) {
      const TokenCoverage cov = tokens_covered(*leaf, pair);
      for (std::size_t t : cov.complex) fn(l.unit_offset[p] + t, *leaf);
      for (std::size_t t : cov.simplified) fn(l.unit_offset[p] + complex_n + t, *leaf);
    }
  }
}

TokenLabelMatrix EmptyMatrix(const Layout &l) {
  TokenLabelMatrix m;
  m.units = l.units;
  m.coders = l.coders;
  m.labels.assign(l.coders.size(), std::vector<int>(l.units.size(), TokenLabelMatrix::kMissing));
  return m;
}

std::size_t PairUnitCount(const SentencePair &pair) {
  return pair.complex.tokens.size() + pair.simplified.tokens.size();
}

}  // namespace

TokenLabelMatrix build_matrix(const std::vector<AnnotationRecord> &records,
                              const std::vector<SentencePair> &pairs, const EditClass &edit_class,
                              bool expand_composites) {
  const Layout l = MakeLayout(records, pairs);
  TokenLabelMatrix m = EmptyMatrix(l);
  const int in = m.intern("IN");
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    for (std::size_t c = 0; c < l.coders.size(); ++c) {
      const AnnotationRecord *r = l.records_by[p][c];
      if (r == nullptr) continue;
      const std::size_t first = l.unit_offset[p];
      std::fill_n(m.labels[c].begin() + static_cast<std::ptrdiff_t>(first), PairUnitCount(pairs[p]),
                  TokenLabelMatrix::kNone);
      ForEachCoveredUnit(l, pairs[p], p, *r, expand_composites, [&](std::size_t u, const Edit &e) {
        if (edit_class.matches(e)) m.labels[c][u] = in;
      });
    }
  }
  return m;
}

TokenLabelMatrix build_pooled_matrix(const std::vector<AnnotationRecord> &records,
                                     const std::vector<SentencePair> &pairs,
                                     bool expand_composites) {
  const Layout l = MakeLayout(records, pairs);
  TokenLabelMatrix m = EmptyMatrix(l);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const std::size_t first = l.unit_offset[p];
    const std::size_t count = PairUnitCount(pairs[p]);
    for (std::size_t c = 0; c < l.coders.size(); ++c) {
      const AnnotationRecord *r = l.records_by[p][c];
      if (r == nullptr) continue;
      std::vector<std::set<Operation>> ops(count);
      ForEachCoveredUnit(l, pairs[p], p, *r, expand_composites,
                         [&](std::size_t u, const Edit &e) { ops[u - first].insert(e.operation); });
      for (std::size_t k = 0; k < count; ++k) {
        if (ops[k].empty()) {
          m.labels[c][first + k] = TokenLabelMatrix::kNone;
          continue;
        }
        std::string label;
        for (Operation op : ops[k]) {
          if (!label.empty()) label += "+";
          label += to_string(op);
        }
        m.labels[c][first + k] = m.intern(label);
      }
    }
  }
  return m;
}

double krippendorff_alpha(const TokenLabelMatrix &matrix) {
  if (matrix.coders.size() < 2) throw UndefinedStatistic("alpha needs at least two coders");
  const std::size_t k = matrix.label_names.size();
  std::vector<std::vector<double>> coincidence(k, std::vector<double>(k, 0.0));
  std::vector<std::size_t> counts(k);
  for (std::size_t u = 0; u < matrix.units.size(); ++u) {
    std::fill(counts.begin(), counts.end(), 0);
    std::size_t m_u = 0;
    for (const auto &row : matrix.labels) {
      const int v = row[u];
      if (v == TokenLabelMatrix::kMissing) continue;
      ++counts[static_cast<std::size_t>(v)];
      ++m_u;
    }
    if (m_u < 2) continue;
    const double scale = 1.0 / static_cast<double>(m_u - 1);
    for (std::size_t a = 0; a < k; ++a) {
      if (counts[a] == 0) continue;
      for (std::size_t b = 0; b < k; ++b) {
        if (counts[b] == 0) continue;
        const double pairs = a == b ? static_cast<double>(counts[a] * (counts[a] - 1))
                                    : static_cast<double>(counts[a] * counts[b]);
        coincidence[a][b] += pairs * scale;
      }
    }
  }
  std::vector<double> marginal(k, 0.0);
  double n = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) marginal[a] += coincidence[a][b];
    n += marginal[a];
  }
  if (n <= 1.0) throw UndefinedStatistic("no pairable values: every unit has fewer than two labels");
  double observed = 0.0;
  double expected = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b) continue;
      observed += coincidence[a][b];
      expected += marginal[a] * marginal[b];
    }
  }
  if (expected == 0.0) {
    throw UndefinedStatistic("expected disagreement is zero: all values carry one label");
  }
  return 1.0 - (n - 1.0) * observed / expected;
}

PairwiseAgreement pairwise_agreement(const TokenLabelMatrix &matrix) {
  const std::size_t coders = matrix.coders.size();
  if (coders < 2) throw UndefinedStatistic("pairwise agreement needs at least two coders");
  PairwiseAgreement out;
  std::vector<std::size_t> at_least(coders, 0);
  std::size_t all = 0;
  std::map<int, std::size_t> tally;
  for (std::size_t u = 0; u < matrix.units.size(); ++u) {
    tally.clear();
    std::size_t present = 0;
    for (const auto &row : matrix.labels) {
      const int v = row[u];
      if (v == TokenLabelMatrix::kMissing) continue;
      ++present;
      if (v != TokenLabelMatrix::kNone) ++tally[v];
    }
    if (tally.empty()) continue;
    ++out.units;
    std::size_t best = 0;
    for (const auto &[label, count] : tally) best = std::max(best, count);
    for (std::size_t k = 1; k <= best; ++k) ++at_least[k - 1];
    if (present >= 2 && best == present) ++all;
  }
  if (out.units == 0) throw UndefinedStatistic("no unit carries a non-NONE label");
  const double denom = static_cast<double>(out.units);
  for (std::size_t c : at_least) out.at_least.push_back(static_cast<double>(c) / denom);
  out.pct_at_least_two = out.at_least[1];
  out.pct_all = static_cast<double>(all) / denom;
  return out;
}

std::size_t ConfusionMatrix::total() const {
  std::size_t t = 0;
  for (const auto &row : counts) {
    for (std::size_t c : row) t += c;
  }
  return t;
}

namespace {

// Lower value wins when a coder's edits overlap on a token.
int OperationPriority(Operation op) {
  switch (op) {
    case Operation::kStructure:
      return 0;
    case Operation::kSplit:
      return 1;
    case Operation::kReorder:
      return 2;
    case Operation::kSubstitution:
      return 3;
    case Operation::kDeletion:
      return 4;
    case Operation::kInsertion:
      return 5;
  }
  return 6;
}

}  // namespace

ConfusionMatrix confusion(const std::vector<AnnotationRecord> &records,
                          const std::vector<SentencePair> &pairs, bool expand_composites) {
  const Layout l = MakeLayout(records, pairs);
  ConfusionMatrix out;
  for (Operation op : kAllOperations) out.labels.emplace_back(to_string(op));
  out.labels.emplace_back("NONE");
  const std::size_t none = out.labels.size() - 1;
  out.counts.assign(out.labels.size(), std::vector<std::size_t>(out.labels.size(), 0));

  for (std::size_t p = 0; p < pairs.size(); ++p) {
    std::vector<const AnnotationRecord *> coders;
    for (const AnnotationRecord *r : l.records_by[p]) {
      if (r != nullptr) coders.push_back(r);
    }
    if (coders.empty()) continue;
    if (coders.size() != 3) {
      throw InvalidInput("confusion needs exactly 3 coders on pair '" + pairs[p].id + "', got " +
                         std::to_string(coders.size()));
    }
    const std::size_t first = l.unit_offset[p];
    const std::size_t count = PairUnitCount(pairs[p]);
    std::vector<std::vector<std::size_t>> labels(3, std::vector<std::size_t>(count, none));
    for (std::size_t c = 0; c < 3; ++c) {
      ForEachCoveredUnit(l, pairs[p], p, *coders[c], expand_composites,
                         [&](std::size_t u, const Edit &e) {
                           std::size_t &slot = labels[c][u - first];
                           const auto idx = static_cast<std::size_t>(e.operation);
                           if (slot == none || OperationPriority(e.operation) <
                                                   OperationPriority(static_cast<Operation>(slot))) {
                             slot = idx;
                           }
                         });
    }
    for (std::size_t t = 0; t < count; ++t) {
      const std::size_t a = labels[0][t], b = labels[1][t], c = labels[2][t];
      if (a == none && b == none && c == none) continue;
      if (a == b && b == c) {
        ++out.counts[a][a];
        ++out.majority_tokens;
      } else if (a == b || a == c || b == c) {
        const std::size_t major = (a == b || a == c) ? a : b;
        const std::size_t minor = a != major ? a : (b != major ? b : c);
        ++out.counts[major][minor];
        ++out.majority_tokens;
      } else {
        ++out.no_majority;
      }
    }
  }
  return out;
}

std::vector<ErrorPresence> error_presence_agreement(
    const std::vector<AnnotationRecord> &classification_records,
    const std::vector<SentencePair> &pairs, const Typology &typology) {
  const Layout l = MakeLayout(classification_records, pairs);
  std::vector<std::string> type_ids;
  for (const TypeDef &def : typology.types()) {
    if (def.polarity == Polarity::kError) type_ids.push_back(def.id);
  }
  type_ids.push_back(typology.grammar_flag_id());

  std::vector<std::size_t> annotated;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto &row = l.records_by[p];
    if (std::any_of(row.begin(), row.end(), [](const auto *r) { return r != nullptr; })) {
      annotated.push_back(p);
    }
  }

  std::vector<ErrorPresence> out;
  for (const std::string &type_id : type_ids) {
    const bool grammar = type_id == typology.grammar_flag_id();
    TokenLabelMatrix m;
    m.coders = l.coders;
    const int present_label = m.intern("PRESENT");
    m.labels.assign(l.coders.size(), {});
    std::size_t majority = 0;
    for (std::size_t p : annotated) {
      m.units.push_back(pairs[p].id);
      std::size_t votes = 0;
      std::size_t voters = 0;
      for (std::size_t c = 0; c < l.coders.size(); ++c) {
        const AnnotationRecord *r = l.records_by[p][c];
        int label = TokenLabelMatrix::kMissing;
        if (r != nullptr) {
          ++voters;
          label = TokenLabelMatrix::kNone;
          for (const Edit &e : r->edits) {
            if (!e.classification) continue;
            const bool hit = grammar ? e.classification->grammar_error
                                     : e.classification->polarity == Polarity::kError &&
                                           e.classification->error_types.count(type_id);
            if (hit) label = present_label;
          }
          if (label == present_label) ++votes;
        }
        m.labels[c].push_back(label);
      }
      if (2 * votes > voters) ++majority;
    }
    const std::size_t annotated_pairs = annotated.size();
    ErrorPresence e;
    e.type_id = type_id;
    e.frequency = annotated_pairs ? static_cast<double>(majority) / static_cast<double>(annotated_pairs) : 0.0;
    try {
      e.alpha = krippendorff_alpha(m);
    } catch (const UndefinedStatistic &ex) {
      e.alpha_note = ex.what();
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<AgreementRow> agreement_table(const std::vector<AnnotationRecord> &records,
                                          const std::vector<SentencePair> &pairs,
                                          const std::vector<EditClass> &classes,
                                          bool expand_composites) {
  std::vector<AgreementRow> rows;
  for (const EditClass &cls : classes) {
    AgreementRow row;
    row.edit_class = cls.name();
    const TokenLabelMatrix m = build_matrix(records, pairs, cls, expand_composites);
    try {
      row.alpha = krippendorff_alpha(m);
    } catch (const UndefinedStatistic &e) {
      row.note = e.what();
    }
    try {
      const PairwiseAgreement pw = pairwise_agreement(m);
      row.selected_units = pw.units;
      row.pct_two = pw.pct_at_least_two;
      if (pw.at_least.size() >= 3) row.pct_three = pw.at_least[2];
    } catch (const UndefinedStatistic &e) {
      if (row.note.empty()) row.note = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace salsa
