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

#include "salsa/analytics.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "salsa/edit.h"
#include "salsa/error.h"
#include "salsa/tokenizer.h"

namespace salsa {

Moments moments(std::vector<double> values) {
  Moments m;
  m.count = values.size();
  if (values.empty()) return m;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - m.mean) * (v - m.mean);
  m.variance = sq / static_cast<double>(values.size());
  m.sd = std::sqrt(m.variance);
  return m;
}

std::vector<AnnotatedPair> canonical_order(std::vector<AnnotatedPair> data) {
  std::stable_sort(data.begin(), data.end(), [](const AnnotatedPair &a, const AnnotatedPair &b) {
    return std::tie(a.pair.system, a.pair.id, a.annotator) <
           std::tie(b.pair.system, b.pair.id, b.annotator);
  });
  return data;
}

std::vector<EditSizeRow> edit_size_stats(const std::vector<AnnotatedPair> &data,
                                         const Typology &typology) {
  std::map<std::pair<std::string, Side>, std::pair<std::vector<double>, std::vector<double>>> sizes;
  for (const AnnotatedPair &item : canonical_order(data)) {
    for (const Edit &edit : item.edits) {
      const TokenCoverage cov = tokens_covered(edit, item.pair);
      std::array<std::size_t, 2> chars{};
      for (const SpanRange &s : effective_spans(edit)) chars[static_cast<std::size_t>(s.side)] += s.length();
      for (const std::string &type : typology.type_ids(edit)) {
        for (Side side : {Side::kComplex, Side::kSimplified}) {
          if (cov.side(side).empty()) continue;
          auto &[tok, ch] = sizes[{type, side}];
          tok.push_back(static_cast<double>(cov.side(side).size()));
          ch.push_back(static_cast<double>(chars[static_cast<std::size_t>(side)]));
        }
      }
    }
  }
  std::vector<EditSizeRow> rows;
  for (auto &[key, values] : sizes) {
    rows.push_back({key.first, key.second, moments(values.first), moments(values.second)});
  }
  std::sort(rows.begin(), rows.end(), [&](const EditSizeRow &a, const EditSizeRow &b) {
    const auto ia = typology.find(a.type_id) ? typology.index_of(a.type_id) : SIZE_MAX;
    const auto ib = typology.find(b.type_id) ? typology.index_of(b.type_id) : SIZE_MAX;
    return std::tie(ia, a.type_id, a.side) < std::tie(ib, b.type_id, b.side);
  });
  return rows;
}

std::vector<std::size_t> default_length_edges() { return {0, 10, 20, 30, 40}; }

SplitFrequency split_frequency(const std::vector<AnnotatedPair> &data,
                               const std::vector<std::size_t> &edges) {
  if (edges.empty()) throw InvalidInput("length bucket edges must not be empty");
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i] <= edges[i - 1]) throw InvalidInput("length bucket edges must be strictly increasing");
  }
  SplitFrequency out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    LengthBucket b;
    b.lower = edges[i];
    if (i + 1 < edges.size()) b.upper = edges[i + 1];
    out.buckets.push_back(b);
  }
  for (const AnnotatedPair &item : data) {
    const bool split = std::any_of(item.edits.begin(), item.edits.end(),
                                   [](const Edit &e) { return e.operation == Operation::kSplit; });
    ++out.pairs;
    if (split) ++out.with_split;
    const std::size_t len = item.pair.complex.tokens.size();
    if (len < edges.front()) continue;
    auto it = std::upper_bound(edges.begin(), edges.end(), len);
    LengthBucket &b = out.buckets[static_cast<std::size_t>(it - edges.begin()) - 1];
    ++b.pairs;
    if (split) ++b.with_split;
  }
  for (LengthBucket &b : out.buckets) {
    b.proportion = b.pairs ? static_cast<double>(b.with_split) / static_cast<double>(b.pairs) : 0.0;
  }
  out.proportion = out.pairs ? static_cast<double>(out.with_split) / static_cast<double>(out.pairs) : 0.0;
  return out;
}

std::vector<CompositeBreakdown> composite_breakdown(const std::vector<AnnotatedPair> &data) {
  std::vector<CompositeBreakdown> out(2);
  out[0].composite = Operation::kSplit;
  out[1].composite = Operation::kStructure;
  for (const AnnotatedPair &item : data) {
    for (const Edit &edit : item.edits) {
      if (!is_composite(edit.operation)) continue;
      CompositeBreakdown &b = out[edit.operation == Operation::kSplit ? 0 : 1];
      if (edit.constituents.empty()) {
        ++b.excluded_empty;
        continue;
      }
      ++b.composites;
      for (const Edit &c : edit.constituents) {
        const TokenCoverage cov = tokens_covered(c, item.pair);
        b.tokens[static_cast<std::size_t>(c.operation)] += cov.complex.size() + cov.simplified.size();
      }
    }
  }
  for (CompositeBreakdown &b : out) {
    std::size_t total = 0;
    for (std::size_t t : b.tokens) total += t;
    if (total == 0) continue;
    for (std::size_t k = 0; k < b.tokens.size(); ++k) {
      b.percent[k] = 100.0 * static_cast<double>(b.tokens[k]) / static_cast<double>(total);
    }
  }
  return out;
}

std::vector<SystemReport> system_report(const std::vector<AnnotatedPair> &data,
                                        const WeightScheme &weights, const Typology &typology) {
  struct Acc {
    std::vector<double> total, quality, error;
    std::array<std::vector<double>, 3> family;
    std::map<std::string, std::size_t> counts;
    std::map<std::string, std::size_t> error_sentences;
  };
  std::map<std::string, Acc> acc;
  for (const AnnotatedPair &item : canonical_order(data)) {
    Acc &a = acc[item.pair.system];
    const ScoreBreakdown s = sentence_score(item.pair, item.edits, weights, typology);
    a.total.push_back(s.total);
    a.quality.push_back(s.quality);
    a.error.push_back(s.error);
    for (std::size_t f = 0; f < 3; ++f) a.family[f].push_back(s.by_family[f]);
    std::set<std::string> errors_here;
    for (const Edit &edit : item.edits) {
      for (const std::string &type : typology.type_ids(edit)) {
        ++a.counts[type];
        if (edit.classification->polarity == Polarity::kError) errors_here.insert(type);
      }
    }
    for (const std::string &type : errors_here) ++a.error_sentences[type];
  }
  std::vector<SystemReport> out;
  for (auto &[system, a] : acc) {
    SystemReport r;
    r.system = system;
    r.sentences = a.total.size();
    for (double v : a.total) r.total_sum += v;
    r.total = moments(a.total);
    r.quality = moments(a.quality);
    r.error = moments(a.error);
    for (std::size_t f = 0; f < 3; ++f) r.by_family[f] = moments(a.family[f]);
    r.edit_counts = a.counts;
    for (const TypeDef &def : typology.types()) {
      if (def.polarity != Polarity::kError) continue;
      auto it = a.error_sentences.find(def.id);
      const std::size_t n = it == a.error_sentences.end() ? 0 : it->second;
      r.error_frequency[def.id] = static_cast<double>(n) / static_cast<double>(r.sentences);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::size_t char_edit_distance(const std::string &a, const std::string &b) {
  const std::u32string x = decode_utf8(a);
  const std::u32string y = decode_utf8(b);
  std::vector<std::size_t> prev(y.size() + 1), cur(y.size() + 1);
  for (std::size_t j = 0; j <= y.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= y.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x[i - 1] == y[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[y.size()];
}

}  // namespace salsa
