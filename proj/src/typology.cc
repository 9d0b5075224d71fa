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

#include "salsa/typology.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>

#include "salsa/error.h"

namespace salsa {

// Generated from data/typology.json.
extern const char *const kDefaultTypologyJson;

namespace {

using nlohmann::json;

const json &Member(const json &obj, const char *key, const std::string &path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "/" + key, "missing required field");
  return *it;
}

std::string RequireString(const json &obj, const char *key, const std::string &path) {
  const json &v = Member(obj, key, path);
  if (!v.is_string() || v.get_ref<const std::string &>().empty()) {
    throw SchemaError(path + "/" + key, "expected non-empty string");
  }
  return v.get<std::string>();
}

template <typename Enum, typename Parse>
std::set<Enum> EnumSet(const json &obj, const char *key, const std::string &path,
                       Parse parse, bool allow_empty) {
  const json &arr = Member(obj, key, path);
  const std::string here = path + "/" + key;
  if (!arr.is_array()) throw SchemaError(here, "expected array");
  if (arr.empty() && !allow_empty) throw SchemaError(here, "must not be empty");
  std::set<Enum> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) throw SchemaError(here + "/" + std::to_string(i), "expected string");
    try {
      out.insert(parse(arr[i].get<std::string>()));
    } catch (const InvalidInput &e) {
      throw SchemaError(here + "/" + std::to_string(i), e.what());
    }
  }
  return out;
}

struct PathConstraint {
  std::optional<Operation> operation;
  std::optional<InfoChange> change;
};

}  // namespace

Typology Typology::FromJson(const json &doc) {
  if (!doc.is_object()) throw SchemaError("", "typology document must be an object");
  Typology t;
  t.document_ = doc;

  const json &types = Member(doc, "types", "");
  if (!types.is_array() || types.empty()) throw SchemaError("/types", "expected non-empty array");
  for (std::size_t i = 0; i < types.size(); ++i) {
    const std::string path = "/types/" + std::to_string(i);
    const json &entry = types[i];
    if (!entry.is_object()) throw SchemaError(path, "expected object");
    TypeDef def;
    def.id = RequireString(entry, "id", path);
    def.name = RequireString(entry, "name", path);
    try {
      def.family = parse_family(RequireString(entry, "family", path));
    } catch (const InvalidInput &e) {
      throw SchemaError(path + "/family", e.what());
    }
    try {
      def.polarity = parse_polarity(RequireString(entry, "polarity", path));
    } catch (const InvalidInput &e) {
      throw SchemaError(path + "/polarity", e.what());
    }
    def.operations = EnumSet<Operation>(entry, "operations", path, parse_operation, false);
    def.information_changes =
        EnumSet<InfoChange>(entry, "information_changes", path, parse_info_change, true);
    if (auto it = entry.find("description"); it != entry.end() && it->is_string()) {
      def.description = it->get<std::string>();
    }
    if (t.index_.count(def.id)) throw SchemaError(path + "/id", "duplicate type id '" + def.id + "'");
    t.index_.emplace(def.id, t.types_.size());
    t.types_.push_back(std::move(def));
  }

  const json &flag = Member(doc, "grammar_flag", "");
  if (!flag.is_object()) throw SchemaError("/grammar_flag", "expected object");
  t.grammar_flag_id_ = RequireString(flag, "id", "/grammar_flag");
  if (t.index_.count(t.grammar_flag_id_)) {
    throw SchemaError("/grammar_flag/id", "grammar flag id collides with a type id");
  }

  std::set<std::string> reached;
  std::function<DecisionNode(const json &, const std::string &, std::size_t, PathConstraint)>
      build = [&](const json &node, const std::string &path, std::size_t depth,
                  PathConstraint constraint) -> DecisionNode {
    if (!node.is_object()) throw SchemaError(path, "expected object");
    DecisionNode out;
    if (node.contains("type")) {
      out.type_id = RequireString(node, "type", path);
      const TypeDef *def = t.find(out.type_id);
      if (def == nullptr) throw SchemaError(path + "/type", "unknown type id '" + out.type_id + "'");
      if (constraint.operation && !def->operations.count(*constraint.operation)) {
        throw SchemaError(path + "/type", "type '" + out.type_id + "' does not allow operation '" +
                                              std::string(to_string(*constraint.operation)) + "'");
      }
      if (constraint.change && !def->information_changes.count(*constraint.change)) {
        throw SchemaError(path + "/type", "type '" + out.type_id +
                                              "' does not allow information change '" +
                                              std::string(to_string(*constraint.change)) + "'");
      }
      reached.insert(out.type_id);
      return out;
    }
    if (depth >= kMaxDepth) {
      throw SchemaError(path, "decision path deeper than " + std::to_string(kMaxDepth) + " questions");
    }
    out.question = RequireString(node, "question", path);
    if (auto it = node.find("prompt"); it != node.end() && it->is_string()) out.prompt = *it;
    if (auto it = node.find("multi_select"); it != node.end()) {
      if (!it->is_boolean()) throw SchemaError(path + "/multi_select", "expected boolean");
      out.multi_select = it->get<bool>();
    }
    const json &branches = Member(node, "branches", path);
    if (!branches.is_array() || branches.empty()) {
      throw SchemaError(path + "/branches", "expected non-empty array");
    }
    for (std::size_t i = 0; i < branches.size(); ++i) {
      const std::string bpath = path + "/branches/" + std::to_string(i);
      if (!branches[i].is_object()) throw SchemaError(bpath, "expected object");
      std::string answer = RequireString(branches[i], "answer", bpath);
      if (std::find(out.answers.begin(), out.answers.end(), answer) != out.answers.end()) {
        throw SchemaError(bpath + "/answer", "duplicate answer '" + answer + "'");
      }
      PathConstraint next = constraint;
      try {
        if (out.question == "operation") next.operation = parse_operation(answer);
        if (out.question == "information_change") next.change = parse_info_change(answer);
      } catch (const InvalidInput &e) {
        throw SchemaError(bpath + "/answer", e.what());
      }
      DecisionNode child = build(Member(branches[i], "node", bpath), bpath + "/node", depth + 1, next);
      if (out.multi_select) {
        if (!child.is_leaf() || t.at(child.type_id).polarity != Polarity::kError) {
          throw SchemaError(bpath, "multi-select branches must be error-type leaves");
        }
      }
      out.answers.push_back(std::move(answer));
      out.children.push_back(std::move(child));
    }
    return out;
  };
  t.root_ = build(Member(doc, "tree", ""), "/tree", 0, {});
  if (t.root_.is_leaf()) throw SchemaError("/tree", "root must be a question");

  for (const TypeDef &def : t.types_) {
    if (!reached.count(def.id)) {
      throw SchemaError("/tree", "type '" + def.id + "' is not reachable from the decision tree");
    }
  }
  return t;
}

Typology Typology::Load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open typology file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error &e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  return FromJson(doc);
}

const json &Typology::DefaultDocument() {
  static const json doc = json::parse(kDefaultTypologyJson);
  return doc;
}

const Typology &Typology::Default() {
  static const Typology typology = FromJson(DefaultDocument());
  return typology;
}

const TypeDef *Typology::find(std::string_view id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &types_[it->second];
}

const TypeDef &Typology::at(std::string_view id) const {
  const TypeDef *def = find(id);
  if (def == nullptr) throw InvalidInput("unknown edit type '" + std::string(id) + "'");
  return *def;
}

std::size_t Typology::index_of(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw InvalidInput("unknown edit type '" + std::string(id) + "'");
  return it->second;
}

std::string Typology::classify(std::span<const std::string> answers) const {
  const DecisionNode *node = &root_;
  for (std::size_t depth = 0; depth < answers.size(); ++depth) {
    if (node->is_leaf()) {
      throw ClassificationError("answer '" + answers[depth] + "' given after reaching leaf '" +
                                node->type_id + "'");
    }
    auto it = std::find(node->answers.begin(), node->answers.end(), answers[depth]);
    if (it == node->answers.end()) {
      throw ClassificationError("answer '" + answers[depth] + "' matches no branch of question '" +
                                node->question + "' at depth " + std::to_string(depth));
    }
    node = &node->children[static_cast<std::size_t>(it - node->answers.begin())];
  }
  if (!node->is_leaf()) {
    throw ClassificationError("walk ended at unanswered question '" + node->question + "'");
  }
  return node->type_id;
}

std::vector<std::vector<std::string>> Typology::leaf_paths() const {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> path;
  std::function<void(const DecisionNode &)> walk = [&](const DecisionNode &node) {
    if (node.is_leaf()) {
      out.push_back(path);
      return;
    }
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      path.push_back(node.answers[i]);
      walk(node.children[i]);
      path.pop_back();
    }
  };
  walk(root_);
  return out;
}

std::size_t Typology::max_depth() const {
  std::size_t depth = 0;
  for (const auto &p : leaf_paths()) depth = std::max(depth, p.size());
  return depth;
}

const TypeDef *Typology::trivial_type_for(Operation op) const {
  for (const TypeDef &def : types_) {
    if (def.polarity == Polarity::kTrivial && def.operations.count(op)) return &def;
  }
  return nullptr;
}

std::vector<std::string> Typology::type_ids(const Edit &edit) const {
  if (!edit.classification) return {};
  const Classification &c = *edit.classification;
  switch (c.polarity) {
    case Polarity::kQuality:
      if (c.quality_type) return {*c.quality_type};
      return {};
    case Polarity::kError: {
      std::vector<std::string> ids(c.error_types.begin(), c.error_types.end());
      std::sort(ids.begin(), ids.end(), [&](const std::string &a, const std::string &b) {
        const TypeDef *da = find(a);
        const TypeDef *db = find(b);
        const std::size_t ia = da ? index_of(a) : types_.size();
        const std::size_t ib = db ? index_of(b) : types_.size();
        return ia != ib ? ia < ib : a < b;
      });
      return ids;
    }
    case Polarity::kTrivial:
      if (const TypeDef *def = trivial_type_for(edit.operation)) return {def->id};
      return {};
  }
  return {};
}

Family Typology::family_of(const Edit &edit) const {
  for (const std::string &id : type_ids(edit)) {
    if (const TypeDef *def = find(id)) return def->family;
  }
  throw ScoringError("edit '" + edit.id + "' has no catalog type to derive a family from");
}

}  // namespace salsa
