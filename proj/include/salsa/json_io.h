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

#ifndef SALSA_JSON_IO_H_
#define SALSA_JSON_IO_H_

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "salsa/annotation.h"
#include "salsa/types.h"

namespace salsa {

using nlohmann::json;

// Parsers validate as they go and throw SchemaError carrying the path of the
// offending node ("/pairs/3/complex/text"). `path` is the location of `doc`
// inside its enclosing document.

json span_to_json(const SpanRange &span);
SpanRange span_from_json(const json &doc, const std::string &path);

json classification_to_json(const Classification &c);
Classification classification_from_json(const json &doc, const std::string &path);

json edit_to_json(const Edit &edit);
Edit edit_from_json(const json &doc, const std::string &path);

// Corpus pair: {id, system, complex: {text}, simplified: {text}, metadata}.
// Tokens are derived from text on parse.
json pair_to_json(const SentencePair &pair);
SentencePair pair_from_json(const json &doc, const std::string &path);

json record_to_json(const AnnotationRecord &record);
AnnotationRecord record_from_json(const json &doc, const std::string &path);

struct Corpus {
  std::string id;
  std::vector<SentencePair> pairs;
};

// {id?, pairs: [...]}. Pair ids must be unique.
json corpus_to_json(const Corpus &corpus);
Corpus corpus_from_json(const json &doc, const std::string &default_id = {});

inline constexpr int kAnnotationFormatVersion = 1;

// {format: "salsa-annotations", version: 1, records: [...]}. A bare array of
// records is also accepted on input.
json annotations_to_json(const std::vector<AnnotationRecord> &records);
std::vector<AnnotationRecord> annotations_from_json(const json &doc);

json read_json_file(const std::filesystem::path &path);
void write_json_file(const std::filesystem::path &path, const json &doc);
// Writes through a temporary file and renames into place.
void write_text_file_atomic(const std::filesystem::path &path,
                            const std::string &text);

// Fixed 9-significant-digit rendering used by every report.
std::string format_real(double value);

// Copy of `doc` with every floating-point number rounded to the report
// precision; dump() of the result is byte-stable.
json stable_reals(const json &doc);
// stable_reals(doc).dump(indent) plus a trailing newline.
std::string dump_stable(const json &doc, int indent = 2);

}  // namespace salsa

#endif  // SALSA_JSON_IO_H_
