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

#include "salsa/json_io.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "salsa/error.h"
#include "salsa/tokenizer.h"

namespace salsa {
namespace {

const json &Field(const json &obj, const char *key, const std::string &path) {
  if (!obj.is_object()) throw SchemaError(path, "expected object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "/" + key, "missing required field");
  return *it;
}

const json *OptionalField(const json &obj, const char *key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

std::string String(const json &v, const std::string &path, bool allow_empty = false) {
  if (!v.is_string()) throw SchemaError(path, "expected string");
  std::string s = v.get<std::string>();
  if (!allow_empty && s.empty()) throw SchemaError(path, "must not be empty");
  return s;
}

std::size_t Offset(const json &v, const std::string &path) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw SchemaError(path, "expected non-negative integer");
  }
  return v.get<std::size_t>();
}

template <typename Enum, typename Parse>
Enum EnumField(const json &v, const std::string &path, Parse parse) {
  const std::string name = String(v, path);
  try {
    return parse(name);
  } catch (const InvalidInput &e) {
    throw SchemaError(path, e.what());
  }
}

}  // namespace

json span_to_json(const SpanRange &span) {
  return {{"side", to_string(span.side)}, {"start", span.start}, {"end", span.end}};
}

SpanRange span_from_json(const json &doc, const std::string &path) {
  SpanRange s;
  s.side = EnumField<Side>(Field(doc, "side", path), path + "/side", parse_side);
  s.start = Offset(Field(doc, "start", path), path + "/start");
  s.end = Offset(Field(doc, "end", path), path + "/end");
  if (s.start >= s.end) throw SchemaError(path, "span start must be < end");
  return s;
}

json classification_to_json(const Classification &c) {
  json out = {{"polarity", to_string(c.polarity)},
              {"grammar_error", c.grammar_error},
              {"rating", c.rating}};
  if (c.quality_type) out["quality_type"] = *c.quality_type;
  if (!c.error_types.empty()) out["error_types"] = c.error_types;
  return out;
}

Classification classification_from_json(const json &doc, const std::string &path) {
  Classification c;
  c.polarity = EnumField<Polarity>(Field(doc, "polarity", path), path + "/polarity", parse_polarity);
  if (const json *q = OptionalField(doc, "quality_type")) {
    c.quality_type = String(*q, path + "/quality_type");
  }
  if (const json *errs = OptionalField(doc, "error_types")) {
    if (!errs->is_array()) throw SchemaError(path + "/error_types", "expected array");
    for (std::size_t i = 0; i < errs->size(); ++i) {
      c.error_types.insert(String((*errs)[i], path + "/error_types/" + std::to_string(i)));
    }
  }
  if (const json *g = OptionalField(doc, "grammar_error")) {
    if (!g->is_boolean()) throw SchemaError(path + "/grammar_error", "expected boolean");
    c.grammar_error = g->get<bool>();
  }
  if (const json *r = OptionalField(doc, "rating")) {
    if (!r->is_number_integer()) throw SchemaError(path + "/rating", "expected integer");
    c.rating = r->get<int>();
  }
  return c;
}

json edit_to_json(const Edit &edit) {
  json spans = json::array();
  for (const SpanRange &s : edit.spans) spans.push_back(span_to_json(s));
  json out = {{"id", edit.id}, {"operation", to_string(edit.operation)}, {"spans", spans}};
  if (edit.reorder_level) out["reorder_level"] = to_string(*edit.reorder_level);
  if (edit.information_change) out["information_change"] = to_string(*edit.information_change);
  if (!edit.constituents.empty() || is_composite(edit.operation)) {
    json cs = json::array();
    for (const Edit &c : edit.constituents) cs.push_back(edit_to_json(c));
    out["constituents"] = cs;
  }
  if (edit.classification) out["classification"] = classification_to_json(*edit.classification);
  if (edit.structure_label) out["structure_label"] = *edit.structure_label;
  return out;
}

Edit edit_from_json(const json &doc, const std::string &path) {
  Edit e;
  e.id = String(Field(doc, "id", path), path + "/id");
  e.operation = EnumField<Operation>(Field(doc, "operation", path), path + "/operation",
                                     parse_operation);
  if (const json *spans = OptionalField(doc, "spans")) {
    if (!spans->is_array()) throw SchemaError(path + "/spans", "expected array");
    for (std::size_t i = 0; i < spans->size(); ++i) {
      e.spans.push_back(span_from_json((*spans)[i], path + "/spans/" + std::to_string(i)));
    }
  }
  if (const json *lvl = OptionalField(doc, "reorder_level")) {
    e.reorder_level =
        EnumField<ReorderLevel>(*lvl, path + "/reorder_level", parse_reorder_level);
  }
  if (const json *ic = OptionalField(doc, "information_change")) {
    e.information_change =
        EnumField<InfoChange>(*ic, path + "/information_change", parse_info_change);
  }
  if (const json *cs = OptionalField(doc, "constituents")) {
    if (!cs->is_array()) throw SchemaError(path + "/constituents", "expected array");
    for (std::size_t i = 0; i < cs->size(); ++i) {
      e.constituents.push_back(
          edit_from_json((*cs)[i], path + "/constituents/" + std::to_string(i)));
    }
  }
  if (const json *c = OptionalField(doc, "classification")) {
    e.classification = classification_from_json(*c, path + "/classification");
  }
  if (const json *lbl = OptionalField(doc, "structure_label")) {
    e.structure_label = String(*lbl, path + "/structure_label");
  }
  return e;
}

json pair_to_json(const SentencePair &pair) {
  return {{"id", pair.id},
          {"system", pair.system},
          {"complex", {{"text", pair.complex.text}}},
          {"simplified", {{"text", pair.simplified.text}}},
          {"metadata", pair.metadata}};
}

SentencePair pair_from_json(const json &doc, const std::string &path) {
  SentencePair p;
  p.id = String(Field(doc, "id", path), path + "/id");
  if (const json *sys = OptionalField(doc, "system")) p.system = String(*sys, path + "/system", true);
  auto text = [&](const char *side) {
    const std::string here = path + "/" + side;
    const std::string t = String(Field(Field(doc, side, path), "text", here), here + "/text");
    return t;
  };
  try {
    p.complex = tokenize(text("complex"), Side::kComplex, p.id + ":C");
  } catch (const InvalidInput &e) {
    throw SchemaError(path + "/complex/text", e.what());
  }
  try {
    p.simplified = tokenize(text("simplified"), Side::kSimplified, p.id + ":S");
  } catch (const InvalidInput &e) {
    throw SchemaError(path + "/simplified/text", e.what());
  }
  if (const json *meta = OptionalField(doc, "metadata")) {
    if (!meta->is_object()) throw SchemaError(path + "/metadata", "expected object");
    p.metadata = *meta;
  }
  return p;
}

json record_to_json(const AnnotationRecord &record) {
  json edits = json::array();
  for (const Edit &e : record.edits) edits.push_back(edit_to_json(e));
  return {{"annotator", record.annotator},
          {"pair_id", record.pair_id},
          {"stage", to_string(record.stage)},
          {"edits", edits},
          {"submitted_at", record.submitted_at},
          {"revision", record.revision}};
}

AnnotationRecord record_from_json(const json &doc, const std::string &path) {
  AnnotationRecord r;
  r.annotator = String(Field(doc, "annotator", path), path + "/annotator");
  r.pair_id = String(Field(doc, "pair_id", path), path + "/pair_id");
  r.stage = EnumField<Stage>(Field(doc, "stage", path), path + "/stage", parse_stage);
  const json &edits = Field(doc, "edits", path);
  if (!edits.is_array()) throw SchemaError(path + "/edits", "expected array");
  for (std::size_t i = 0; i < edits.size(); ++i) {
    r.edits.push_back(edit_from_json(edits[i], path + "/edits/" + std::to_string(i)));
  }
  if (const json *ts = OptionalField(doc, "submitted_at")) {
    r.submitted_at = String(*ts, path + "/submitted_at", true);
  }
  if (const json *rev = OptionalField(doc, "revision")) {
    if (!rev->is_number_integer() || rev->get<std::int64_t>() < 1) {
      throw SchemaError(path + "/revision", "expected positive integer");
    }
    r.revision = rev->get<std::int64_t>();
  }
  return r;
}

json corpus_to_json(const Corpus &corpus) {
  json pairs = json::array();
  for (const SentencePair &p : corpus.pairs) pairs.push_back(pair_to_json(p));
  json out = {{"pairs", pairs}};
  if (!corpus.id.empty()) out["id"] = corpus.id;
  return out;
}

Corpus corpus_from_json(const json &doc, const std::string &default_id) {
  Corpus c;
  if (!doc.is_object()) throw SchemaError("", "corpus must be an object");
  c.id = default_id;
  if (const json *id = OptionalField(doc, "id")) c.id = String(*id, "/id");
  const json &pairs = Field(doc, "pairs", "");
  if (!pairs.is_array()) throw SchemaError("/pairs", "expected array");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string path = "/pairs/" + std::to_string(i);
    SentencePair p = pair_from_json(pairs[i], path);
    if (!seen.insert(p.id).second) throw SchemaError(path + "/id", "duplicate pair id '" + p.id + "'");
    c.pairs.push_back(std::move(p));
  }
  return c;
}

json annotations_to_json(const std::vector<AnnotationRecord> &records) {
  json arr = json::array();
  for (const AnnotationRecord &r : records) arr.push_back(record_to_json(r));
  return {{"format", "salsa-annotations"}, {"version", kAnnotationFormatVersion}, {"records", arr}};
}

std::vector<AnnotationRecord> annotations_from_json(const json &doc) {
  const json *records = &doc;
  std::string base;
  if (doc.is_object()) {
    if (const json *fmt = OptionalField(doc, "format");
        fmt != nullptr && (!fmt->is_string() || *fmt != "salsa-annotations")) {
      throw SchemaError("/format", "expected \"salsa-annotations\"");
    }
    if (const json *v = OptionalField(doc, "version");
        v != nullptr && (!v->is_number_integer() || v->get<int>() > kAnnotationFormatVersion)) {
      throw SchemaError("/version", "unsupported annotation format version");
    }
    records = &Field(doc, "records", "");
    base = "/records";
  }
  if (!records->is_array()) throw SchemaError(base, "expected array of records");
  std::vector<AnnotationRecord> out;
  for (std::size_t i = 0; i < records->size(); ++i) {
    out.push_back(record_from_json((*records)[i], base + "/" + std::to_string(i)));
  }
  return out;
}

json read_json_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw SchemaError("", path.string() + ": invalid JSON: " + e.what());
  }
}

void write_text_file_atomic(const std::filesystem::path &path, const std::string &text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StoreError("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw StoreError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_json_file(const std::filesystem::path &path, const json &doc) {
  write_text_file_atomic(path, doc.dump(2) + "\n");
}

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) value = 0.0;  // drop negative zero
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

json stable_reals(const json &doc) {
  if (doc.is_number_float()) {
    const double v = doc.get<double>();
    if (!std::isfinite(v)) return nullptr;
    return std::strtod(format_real(v).c_str(), nullptr);
  }
  if (doc.is_array()) {
    json out = json::array();
    for (const json &item : doc) out.push_back(stable_reals(item));
    return out;
  }
  if (doc.is_object()) {
    json out = json::object();
    for (auto it = doc.begin(); it != doc.end(); ++it) out[it.key()] = stable_reals(it.value());
    return out;
  }
  return doc;
}

std::string dump_stable(const json &doc, int indent) { return stable_reals(doc).dump(indent) + "\n"; }

}  // namespace salsa
