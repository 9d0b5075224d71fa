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

#ifndef SALSA_ANALYTICS_H_
#define SALSA_ANALYTICS_H_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "salsa/annotation.h"
#include "salsa/scoring.h"
#include "salsa/typology.h"

namespace salsa {

// Population mean and standard deviation / variance.
struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double sd = 0.0;
  std::size_t count = 0;
};

Moments moments(std::vector<double> values);

struct EditSizeRow {
  std::string type_id;
  Side side = Side::kComplex;
  Moments tokens;
  Moments chars;
};

// Span sizes per edit type and side. An edit counts on a side only when it
// touches that side; error edits count once for each of their types.
std::vector<EditSizeRow> edit_size_stats(const std::vector<AnnotatedPair> &data,
                                         const Typology &typology);

struct LengthBucket {
  std::size_t lower = 0;
  std::optional<std::size_t> upper;  // exclusive; none for the last bucket
  std::size_t pairs = 0;
  std::size_t with_split = 0;
  double proportion = 0.0;
};

struct SplitFrequency {
  std::vector<LengthBucket> buckets;
  std::size_t pairs = 0;
  std::size_t with_split = 0;
  double proportion = 0.0;
};

std::vector<std::size_t> default_length_edges();

// Buckets on complex-sentence token count: [e0, e1), ..., [e_last, inf).
// Pairs shorter than e0 only count toward the overall proportion. Throws
// InvalidInput unless edges are strictly increasing and non-empty.
SplitFrequency split_frequency(const std::vector<AnnotatedPair> &data,
                               const std::vector<std::size_t> &edges);

struct CompositeBreakdown {
  Operation composite = Operation::kSplit;
  std::size_t composites = 0;
  std::size_t excluded_empty = 0;
  // Indexed by Operation; only the four single operations are non-zero.
  std::array<std::size_t, 6> tokens{};
  std::array<double, 6> percent{};
};

// Share of constituent tokens by operation, for split and structure edits.
std::vector<CompositeBreakdown> composite_breakdown(const std::vector<AnnotatedPair> &data);

struct SystemReport {
  std::string system;
  std::size_t sentences = 0;
  Moments total;
  std::array<Moments, 3> by_family;
  Moments quality;
  Moments error;
  std::map<std::string, std::size_t> edit_counts;
  // Fraction of the system's sentences containing each error type.
  std::map<std::string, double> error_frequency;
  double total_sum = 0.0;
};

std::vector<SystemReport> system_report(const std::vector<AnnotatedPair> &data,
                                        const WeightScheme &weights, const Typology &typology);

// Character-level Levenshtein distance over code points.
std::size_t char_edit_distance(const std::string &a, const std::string &b);

// Sorted by (system, pair id, annotator) so aggregate arithmetic does not
// depend on input order.
std::vector<AnnotatedPair> canonical_order(std::vector<AnnotatedPair> data);

}  // namespace salsa

#endif  // SALSA_ANALYTICS_H_
