// Copyright 2026 The CI Extractor Authors.
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

// Dependency-type rule mapping. Each token whose relation to its head is in
// one of the rule sets yields a span covering its whole subtree:
//
//   Attribute  dobj, parataxis, nsubjpass
//   Actor      nsubj, plus pronoun subjects
//   TP         xcomp, ccomp, advcl, oprd
//   Subject    poss, agent
//
// Dependency types cannot tell senders from receivers, so subjects map to
// the merged Actor label.

#ifndef CIEXTRACT_DP_MAPPER_HPP_
#define CIEXTRACT_DP_MAPPER_HPP_

#include <filesystem>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ciextract/base.hpp"
#include "ciextract/config.hpp"
#include "ciextract/corpus.hpp"
#include "ciextract/interchange.hpp"

namespace ciex {

// Source tag of spans produced by the pronoun-subject rule.
inline constexpr const char *kPronounTag = "pron";

struct DepMappingRules {
  std::set<std::string> attribute_types = {"dobj", "parataxis", "nsubjpass"};
  std::set<std::string> actor_types = {"nsubj"};
  // A PRON/PRP token attached as nsubj yields an Actor span tagged "pron",
  // whether or not nsubj itself is an actor type.
  bool pronoun_actor = true;
  std::set<std::string> tp_types = {"xcomp", "ccomp", "advcl", "oprd"};
  std::set<std::string> subject_types = {"poss", "agent"};

  void Validate() const {
    const std::vector<std::pair<const char *, const std::set<std::string> *>> sets = {
        {"attribute", &attribute_types},
        {"actor", &actor_types},
        {"tp", &tp_types},
        {"subject", &subject_types}};
    for (size_t i = 0; i < sets.size(); ++i) {
      if (sets[i].second->count(kPronounTag) > 0) {
        throw ValidationError(std::string("dependency rules: \"pron\" is reserved (") +
                              sets[i].first + ")");
      }
      for (size_t j = i + 1; j < sets.size(); ++j) {
        for (const std::string &type : *sets[i].second) {
          if (sets[j].second->count(type) > 0) {
            throw ValidationError("dependency rules: \"" + type + "\" listed under both " +
                                  sets[i].first + " and " + sets[j].first);
          }
        }
      }
    }
  }

  // The parameter a source tag maps to, if any.
  std::optional<CIParam> ParamFor(const std::string &tag) const {
    if (attribute_types.count(tag)) return CIParam::kAttribute;
    if (actor_types.count(tag) || (pronoun_actor && tag == kPronounTag)) {
      return CIParam::kActor;
    }
    if (tp_types.count(tag)) return CIParam::kTP;
    if (subject_types.count(tag)) return CIParam::kSubject;
    return std::nullopt;
  }
};

// [min, max + 1) over the token and all of its descendants. For
// non-projective subtrees this is the covering interval.
inline std::pair<int, int> SubtreeSpan(const DepTree &tree, int index) {
  if (index < 0 || index >= tree.size()) {
    throw ValidationError("subtree index out of bounds");
  }
  std::vector<std::vector<int>> children = tree.Children();
  int lo = index;
  int hi = index;
  std::vector<int> stack = {index};
  while (!stack.empty()) {
    int node = stack.back();
    stack.pop_back();
    lo = std::min(lo, node);
    hi = std::max(hi, node);
    for (int child : children[node]) stack.push_back(child);
  }
  return {lo, hi + 1};
}

namespace internal {

inline bool IsPronounPos(const std::optional<std::string> &pos) {
  return pos && (*pos == "PRON" || *pos == "PRP" || *pos == "pron");
}

}  // namespace internal

inline FlowAnnotation MapDependencies(const DepTree &tree, const DepMappingRules &rules) {
  FlowAnnotation annotation;
  annotation.statement_id = tree.statement_id;
  annotation.method = "dp";
  std::vector<std::vector<int>> children = tree.Children();
  for (int i = 0; i < tree.size(); ++i) {
    const std::string &type = tree.dep_types[i];
    std::string tag = type;
    if (rules.pronoun_actor && type == "nsubj" && internal::IsPronounPos(tree.tokens[i].pos)) {
      tag = kPronounTag;
    }
    std::optional<CIParam> param = rules.ParamFor(tag);
    if (!param) continue;
    int anchor = i;
    if (*param == CIParam::kSubject && type == "agent") {
      // Passive by-phrase: the subject is the object of the preposition.
      for (int child : children[i]) {
        if (tree.dep_types[child] == "pobj") {
          anchor = child;
          break;
        }
      }
    }
    // Clause markers and adverbs attached to a TP clause head fall inside
    // its subtree.
    auto [start, end] = SubtreeSpan(tree, anchor);
    annotation.spans.push_back(Span{start, end, *param, tag});
  }
  CanonicalizeSpans(&annotation.spans);
  return annotation;
}

inline DepMappingRules LoadDepRules(const std::filesystem::path &path) {
  ConfigDocument doc = LoadConfigFile(path);
  DepMappingRules rules;
  auto read_set = [&](const char *key, std::set<std::string> *out) {
    if (const ConfigValue *v = FindConfigValue(doc, "rules", key)) {
      out->clear();
      out->insert(v->items.begin(), v->items.end());
    }
  };
  read_set("attribute", &rules.attribute_types);
  read_set("actor", &rules.actor_types);
  read_set("tp", &rules.tp_types);
  read_set("subject", &rules.subject_types);
  if (const ConfigValue *v = FindConfigValue(doc, "rules", "pronoun_actor")) {
    rules.pronoun_actor = ConfigBool(*v, "pronoun_actor");
  }
  rules.Validate();
  return rules;
}

}  // namespace ciex

#endif  // CIEXTRACT_DP_MAPPER_HPP_
