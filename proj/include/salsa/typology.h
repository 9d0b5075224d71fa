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

#ifndef SALSA_TYPOLOGY_H_
#define SALSA_TYPOLOGY_H_

#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "salsa/types.h"

namespace salsa {

struct TypeDef {
  std::string id;
  std::string name;
  Family family = Family::kLexical;
  Polarity polarity = Polarity::kQuality;
  std::set<Operation> operations;
  std::set<InfoChange> information_changes;
  std::string description;
};

// A node of the classification decision tree. A node with a non-empty
// type_id is a leaf; otherwise answers[i] leads to children[i].
struct DecisionNode {
  std::string question;
  std::string prompt;
  bool multi_select = false;
  std::string type_id;
  std::vector<std::string> answers;
  std::vector<DecisionNode> children;

  bool is_leaf() const { return !type_id.empty(); }
};

// The edit-type catalog and the decision tree annotators walk to reach a
// type. Immutable after construction.
class Typology {
 public:
  static constexpr std::size_t kMaxDepth = 4;

  // Validates the document against the catalog schema and the structural
  // rules (every type reachable, every leaf known, depth <= kMaxDepth).
  // Throws SchemaError with a JSON-pointer style path.
  static Typology FromJson(const nlohmann::json &doc);
  static Typology Load(const std::filesystem::path &path);
  // The catalog shipped in data/typology.json, compiled in.
  static const Typology &Default();
  static const nlohmann::json &DefaultDocument();

  nlohmann::json ToJson() const { return document_; }

  const std::vector<TypeDef> &types() const { return types_; }
  const TypeDef *find(std::string_view id) const;
  const TypeDef &at(std::string_view id) const;
  // Position in the catalog; used for deterministic tie-breaking.
  std::size_t index_of(std::string_view id) const;
  const DecisionNode &tree() const { return root_; }
  const std::string &grammar_flag_id() const { return grammar_flag_id_; }

  // Walks the tree along `answers` and returns the leaf type id. Throws
  // ClassificationError naming the node when an answer has no branch or
  // the walk stops before a leaf.
  std::string classify(std::span<const std::string> answers) const;

  // Every root-to-leaf answer path, in tree order.
  std::vector<std::vector<std::string>> leaf_paths() const;
  std::size_t max_depth() const;

  // The trivial type produced by `op`, if the catalog has one.
  const TypeDef *trivial_type_for(Operation op) const;

  // Type ids of a classified edit: quality type, error types in catalog
  // order, or the implied trivial type.
  std::vector<std::string> type_ids(const Edit &edit) const;
  // Family used for weighting. Errors of one edit share a family (checked
  // by validate_edit); the first error type in catalog order decides.
  Family family_of(const Edit &edit) const;

 private:
  nlohmann::json document_;
  std::vector<TypeDef> types_;
  std::map<std::string, std::size_t, std::less<>> index_;
  DecisionNode root_;
  std::string grammar_flag_id_;
};

}  // namespace salsa

#endif  // SALSA_TYPOLOGY_H_
