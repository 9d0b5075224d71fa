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

#include "salsa/reports.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "salsa/error.h"
#include "salsa/json_io.h"

namespace salsa {

using nlohmann::json;

std::string_view to_string(View view) {
  return view == View::kIndividual ? "individual" : "aggregated";
}

View parse_view(std::string_view name) {
  if (name == "individual") return View::kIndividual;
  if (name == "aggregated") return View::kAggregated;
  throw InvalidInput("unknown view '" + std::string(name) + "' (expected individual or aggregated)");
}

namespace {

bool FullyClassified(const std::vector<Edit> &edits) {
  return std::all_of(edits.begin(), edits.end(),
                     [](const Edit &e) { return e.classification.has_value(); });
}

std::set<std::string> ClassifiedIds(const AnnotationRecord &r) {
  std::set<std::string> ids;
  for (const Edit &e : r.edits) {
    if (e.classification) ids.insert(e.id);
  }
  return ids;
}

json Optional(const std::optional<double> &v) { return v ? json(*v) : json(nullptr); }

json MomentsJson(const Moments &m) {
  return {{"mean", m.mean}, {"variance", m.variance}, {"sd", m.sd}, {"count", m.count}};
}

std::string Cell(const json &v) {
  if (v.is_null()) return "NA";
  if (v.is_number_float()) return format_real(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

ClassifiedData classified_view(const std::vector<SentencePair> &pairs,
                               const std::vector<AnnotationRecord> &records, View view,
                               const Typology &typology,
                               const std::map<std::string, WorkflowTask> &tasks) {
  std::map<std::string, std::vector<AnnotationRecord>> by_pair;
  std::set<std::string> known;
  for (const SentencePair &p : pairs) known.insert(p.id);

  ClassifiedData out;
  for (const AnnotationRecord &r : latest_records(records)) {
    if (r.stage != Stage::kClassification) continue;
    if (!known.count(r.pair_id)) {
      out.warnings.push_back("record by '" + r.annotator + "' names unknown pair '" + r.pair_id + "'");
      continue;
    }
    by_pair[r.pair_id].push_back(r);
  }

  for (const SentencePair &p : pairs) {
    auto it = by_pair.find(p.id);
    auto task = tasks.find(p.id);
    const bool complete = task != tasks.end() && task->second.state == TaskState::kComplete;
    if (view == View::kIndividual) {
      bool any = false;
      if (it != by_pair.end()) {
        for (const AnnotationRecord &r : it->second) {
          if (!FullyClassified(r.edits)) {
            out.warnings.push_back("skipping partially classified record by '" + r.annotator +
                                   "' on pair '" + p.id + "'");
            continue;
          }
          out.data.push_back({p, r.edits, r.annotator});
          any = true;
        }
      }
      if (!any) out.missing.push_back(p.id);
      continue;
    }

    if (complete) {
      out.data.push_back({p, aggregate_final(task->second, records, typology), "aggregate"});
      continue;
    }
    if (it == by_pair.end() || (task != tasks.end() && task->second.state != TaskState::kUnassigned)) {
      out.missing.push_back(p.id);
      continue;
    }
    const std::vector<AnnotationRecord> &group = it->second;
    const std::set<std::string> ids = ClassifiedIds(group.front());
    bool consistent = true;
    for (const AnnotationRecord &r : group) {
      consistent = consistent && FullyClassified(r.edits) && ClassifiedIds(r) == ids;
    }
    if (!consistent) {
      out.warnings.push_back("classifiers of pair '" + p.id + "' disagree on the edit set; not aggregated");
      out.missing.push_back(p.id);
      continue;
    }
    out.data.push_back({p, aggregate_classifications(group.front().edits, group, typology), "aggregate"});
  }
  out.data = canonical_order(std::move(out.data));
  return out;
}

json scores_json(const ClassifiedData &data, View view, const WeightScheme &weights,
                 const Typology &typology) {
  json rows = json::array();
  for (const AnnotatedPair &a : data.data) {
    const ScoreBreakdown b = sentence_score(a.pair, a.edits, weights, typology);
    json edits = json::array();
    for (const EditContribution &c : b.per_edit) {
      edits.push_back({{"edit_id", c.edit_id},
                       {"family", to_string(c.family)},
                       {"polarity", to_string(c.polarity)},
                       {"rating", c.magnitude},
                       {"length_factor", c.length_factor},
                       {"contribution", c.contribution}});
    }
    rows.push_back({{"pair_id", a.pair.id},
                    {"system", a.pair.system},
                    {"annotator", a.annotator},
                    {"total", b.total},
                    {"by_family",
                     {{"conceptual", b.by_family[0]}, {"syntactic", b.by_family[1]}, {"lexical", b.by_family[2]}}},
                    {"by_polarity", {{"quality", b.quality}, {"error", b.error}}},
                    {"edits", edits}});
  }
  return {{"view", to_string(view)},
          {"weights", weights.ToJson()},
          {"partial", data.partial()},
          {"missing", data.missing},
          {"warnings", data.warnings},
          {"rows", rows}};
}

std::string scores_tsv(const ClassifiedData &data, const WeightScheme &weights,
                       const Typology &typology) {
  std::ostringstream out;
  out << "pair_id\tsystem\tannotator\ttotal\tconceptual\tsyntactic\tlexical\tquality\terror\n";
  for (const AnnotatedPair &a : data.data) {
    const ScoreBreakdown b = sentence_score(a.pair, a.edits, weights, typology);
    out << a.pair.id << '\t' << a.pair.system << '\t' << a.annotator << '\t' << format_real(b.total);
    for (double v : b.by_family) out << '\t' << format_real(v);
    out << '\t' << format_real(b.quality) << '\t' << format_real(b.error) << '\n';
  }
  return out.str();
}

json agreement_json(const std::vector<SentencePair> &pairs,
                    const std::vector<AnnotationRecord> &records, const Typology &typology,
                    const AgreementOptions &options) {
  std::set<std::string> known;
  for (const SentencePair &p : pairs) known.insert(p.id);
  std::vector<AnnotationRecord> staged;
  std::vector<AnnotationRecord> classified;
  for (const AnnotationRecord &r : latest_records(records)) {
    if (!known.count(r.pair_id)) continue;
    if (r.stage == options.stage) staged.push_back(r);
    if (r.stage == Stage::kClassification) classified.push_back(r);
  }

  json rows = json::array();
  for (const AgreementRow &row : agreement_table(staged, pairs, options.classes, options.expand_composites)) {
    rows.push_back({{"class", row.edit_class},
                    {"alpha", Optional(row.alpha)},
                    {"pct_two", Optional(row.pct_two)},
                    {"pct_three", Optional(row.pct_three)},
                    {"selected_units", row.selected_units},
                    {"note", row.note}});
  }

  json pooled = {{"alpha", nullptr}, {"note", ""}};
  try {
    pooled["alpha"] = krippendorff_alpha(build_pooled_matrix(staged, pairs, options.expand_composites));
  } catch (const Error &e) {
    pooled["note"] = e.what();
  }

  std::map<std::string, std::set<std::string>> coders;
  for (const AnnotationRecord &r : staged) coders[r.pair_id].insert(r.annotator);
  std::vector<SentencePair> triples;
  for (const SentencePair &p : pairs) {
    if (coders[p.id].size() == 3) triples.push_back(p);
  }
  std::vector<AnnotationRecord> triple_records;
  for (const AnnotationRecord &r : staged) {
    if (coders[r.pair_id].size() == 3) triple_records.push_back(r);
  }
  const ConfusionMatrix cm = confusion(triple_records, triples, options.expand_composites);
  json confusion_json = {{"labels", cm.labels},
                         {"counts", cm.counts},
                         {"no_majority", cm.no_majority},
                         {"majority_tokens", cm.majority_tokens},
                         {"pairs", triples.size()}};

  json presence = json::array();
  if (!classified.empty()) {
    for (const ErrorPresence &e : error_presence_agreement(classified, pairs, typology)) {
      presence.push_back({{"type", e.type_id},
                          {"frequency", e.frequency},
                          {"alpha", Optional(e.alpha)},
                          {"note", e.alpha_note}});
    }
  }

  return {{"stage", to_string(options.stage)},
          {"expand_composites", options.expand_composites},
          {"pairs", coders.size()},
          {"rows", rows},
          {"pooled", pooled},
          {"confusion", confusion_json},
          {"error_presence", presence}};
}

std::string agreement_tsv(const json &report) {
  std::ostringstream out;
  out << "class\talpha\tpct_two\tpct_three\tselected_units\n";
  for (const json &row : report.at("rows")) {
    out << Cell(row["class"]) << '\t' << Cell(row["alpha"]) << '\t' << Cell(row["pct_two"]) << '\t'
        << Cell(row["pct_three"]) << '\t' << Cell(row["selected_units"]) << '\n';
  }
  return out.str();
}

json stats_json(const ClassifiedData &data, const WeightScheme &weights, const Typology &typology,
                const std::vector<std::size_t> &length_edges, bool edit_distance) {
  json sizes = json::array();
  for (const EditSizeRow &row : edit_size_stats(data.data, typology)) {
    sizes.push_back({{"type", row.type_id},
                     {"side", to_string(row.side)},
                     {"count", row.tokens.count},
                     {"mean_tokens", row.tokens.mean},
                     {"sd_tokens", row.tokens.sd},
                     {"mean_chars", row.chars.mean},
                     {"sd_chars", row.chars.sd}});
  }

  const SplitFrequency sf = split_frequency(data.data, length_edges);
  json buckets = json::array();
  for (const LengthBucket &b : sf.buckets) {
    buckets.push_back({{"lower", b.lower},
                       {"upper", b.upper ? json(*b.upper) : json(nullptr)},
                       {"pairs", b.pairs},
                       {"with_split", b.with_split},
                       {"proportion", b.proportion}});
  }

  json composites = json::array();
  for (const CompositeBreakdown &c : composite_breakdown(data.data)) {
    json tokens = json::object();
    json percent = json::object();
    for (Operation op : kAllOperations) {
      if (is_composite(op)) continue;
      tokens[std::string(to_string(op))] = c.tokens[static_cast<std::size_t>(op)];
      percent[std::string(to_string(op))] = c.percent[static_cast<std::size_t>(op)];
    }
    composites.push_back({{"composite", to_string(c.composite)},
                          {"composites", c.composites},
                          {"excluded_empty", c.excluded_empty},
                          {"tokens", tokens},
                          {"percent", percent}});
  }

  std::map<std::string, double> distance_sum;
  std::map<std::string, std::set<std::string>> distance_pairs;
  if (edit_distance) {
    for (const AnnotatedPair &a : data.data) {
      if (distance_pairs[a.pair.system].insert(a.pair.id).second) {
        distance_sum[a.pair.system] += static_cast<double>(
            char_edit_distance(a.pair.complex.text, a.pair.simplified.text));
      }
    }
  }

  json systems = json::array();
  for (const SystemReport &s : system_report(data.data, weights, typology)) {
    json row = {{"system", s.system},
                {"sentences", s.sentences},
                {"total", MomentsJson(s.total)},
                {"total_sum", s.total_sum},
                {"conceptual", MomentsJson(s.by_family[0])},
                {"syntactic", MomentsJson(s.by_family[1])},
                {"lexical", MomentsJson(s.by_family[2])},
                {"quality", MomentsJson(s.quality)},
                {"error", MomentsJson(s.error)},
                {"edit_counts", s.edit_counts},
                {"error_frequency", s.error_frequency}};
    if (edit_distance) {
      row["mean_char_edit_distance"] =
          distance_sum[s.system] / static_cast<double>(distance_pairs[s.system].size());
    }
    systems.push_back(row);
  }

  return {{"annotations", data.data.size()},
          {"partial", data.partial()},
          {"missing", data.missing},
          {"warnings", data.warnings},
          {"edit_sizes", sizes},
          {"split_frequency",
           {{"pairs", sf.pairs}, {"with_split", sf.with_split}, {"proportion", sf.proportion}, {"buckets", buckets}}},
          {"composites", composites},
          {"systems", systems}};
}

std::string stats_tsv(const json &report) {
  std::ostringstream out;
  out << "system\tsentences\tmean_total\tvar_total\tmean_conceptual\tmean_syntactic\tmean_lexical"
         "\tmean_quality\tmean_error\n";
  for (const json &s : report.at("systems")) {
    out << Cell(s["system"]) << '\t' << Cell(s["sentences"]) << '\t' << Cell(s["total"]["mean"]) << '\t'
        << Cell(s["total"]["variance"]);
    for (const char *key : {"conceptual", "syntactic", "lexical", "quality", "error"}) {
      out << '\t' << Cell(s[key]["mean"]);
    }
    out << '\n';
  }
  out << "\nlower\tupper\tpairs\twith_split\tproportion\n";
  for (const json &b : report.at("split_frequency").at("buckets")) {
    out << Cell(b["lower"]) << '\t' << Cell(b["upper"]) << '\t' << Cell(b["pairs"]) << '\t'
        << Cell(b["with_split"]) << '\t' << Cell(b["proportion"]) << '\n';
  }
  return out.str();
}

}  // namespace salsa
