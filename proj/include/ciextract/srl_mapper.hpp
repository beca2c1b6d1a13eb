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

// Semantic-role mapping. Predicates are classified through a verb lexicon
// into sending and receiving verbs; the class decides which core argument
// is the sender and which the receiver. ARG1/C-ARG1 become the attribute
// and the modifier roles TMP, ADV, MNR, PNC and CAU the transmission
// principle. Frames of untracked verbs are ignored.

#ifndef CIEXTRACT_SRL_MAPPER_HPP_
#define CIEXTRACT_SRL_MAPPER_HPP_

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "ciextract/base.hpp"
#include "ciextract/config.hpp"
#include "ciextract/corpus.hpp"
#include "ciextract/interchange.hpp"

namespace ciex {

enum class VerbClass { kSending, kReceiving, kUntracked };

inline std::string_view VerbClassName(VerbClass c) {
  switch (c) {
    case VerbClass::kSending: return "sending";
    case VerbClass::kReceiving: return "receiving";
    case VerbClass::kUntracked: return "untracked";
  }
  return "?";
}

struct RoleMap {
  std::string sender;
  std::string receiver;
};

inline constexpr const char *kAssumedSubject = "user";

struct VerbLexicon {
  std::set<std::string> sending = {"send", "share", "transmit", "transfer",
                                   "disclose", "provide"};
  std::set<std::string> receiving = {"collect", "gather", "receive", "acquire"};
  // Receiving verbs: the agent acquires, the source sends.
  RoleMap sending_roles = {"ARG0", "ARG2"};
  RoleMap receiving_roles = {"ARG2", "ARG0"};
  std::set<std::string> attribute_roles = {"ARG1", "C-ARG1"};
  std::set<std::string> tp_roles = {"ARGM-TMP", "ARGM-ADV", "ARGM-MNR", "ARGM-PNC",
                                    "ARGM-CAU"};

  void Validate() const {
    for (const std::string &lemma : sending) {
      if (receiving.count(lemma)) {
        throw ValidationError("verb lexicon: \"" + lemma +
                              "\" is both a sending and a receiving verb");
      }
    }
    for (const RoleMap *map : {&sending_roles, &receiving_roles}) {
      if (map->sender.empty() || map->receiver.empty() || map->sender == map->receiver) {
        throw ValidationError("verb lexicon: sender and receiver roles must be distinct");
      }
    }
  }

  const RoleMap &Roles(VerbClass c) const {
    return c == VerbClass::kSending ? sending_roles : receiving_roles;
  }
};

inline VerbClass ClassifyVerb(std::string_view lemma, const VerbLexicon &lexicon) {
  std::string key = Lowercase(Trim(lemma));
  if (lexicon.sending.count(key)) return VerbClass::kSending;
  if (lexicon.receiving.count(key)) return VerbClass::kReceiving;
  return VerbClass::kUntracked;
}

inline std::optional<CIParam> RoleParam(const std::string &role, VerbClass verb_class,
                                        const VerbLexicon &lexicon) {
  if (lexicon.attribute_roles.count(role)) return CIParam::kAttribute;
  if (lexicon.tp_roles.count(role)) return CIParam::kTP;
  const RoleMap &roles = lexicon.Roles(verb_class);
  if (role == roles.sender) return CIParam::kSender;
  if (role == roles.receiver) return CIParam::kReceiver;
  return std::nullopt;
}

// Maps the arguments of one tracked frame. Source tags are "lemma:ROLE".
inline FlowAnnotation MapFrame(const SrlFrame &frame, const VerbLexicon &lexicon) {
  VerbClass verb_class = ClassifyVerb(frame.verb_lemma, lexicon);
  if (verb_class == VerbClass::kUntracked) {
    throw ValidationError("frame for untracked verb \"" + frame.verb_lemma + "\" in " +
                          frame.statement_id);
  }
  FlowAnnotation annotation;
  annotation.statement_id = frame.statement_id;
  annotation.method = "srl";
  annotation.subject_assumption = kAssumedSubject;
  std::string lemma = Lowercase(frame.verb_lemma);
  for (const SrlArgument &arg : frame.arguments) {
    std::optional<CIParam> param = RoleParam(arg.role, verb_class, lexicon);
    if (!param) continue;
    annotation.spans.push_back(Span{arg.start, arg.end, *param, lemma + ":" + arg.role});
  }
  CanonicalizeSpans(&annotation.spans);
  return annotation;
}

inline void CheckSingleStatement(const std::string &statement_id,
                                 const std::vector<SrlFrame> &frames) {
  for (const SrlFrame &f : frames) {
    if (f.statement_id != statement_id) {
      throw ValidationError("mixed statement ids: " + statement_id + " and " +
                            f.statement_id);
    }
  }
}

// Union of the tracked frames' spans, deduplicated on (param, start, end).
// Statements without a tracked predicate are marked unprocessed.
inline FlowAnnotation ExtractStatement(const std::string &statement_id,
                                       const std::vector<SrlFrame> &frames,
                                       const VerbLexicon &lexicon) {
  CheckSingleStatement(statement_id, frames);
  FlowAnnotation annotation;
  annotation.statement_id = statement_id;
  annotation.method = "srl";
  bool tracked = false;
  for (const SrlFrame &frame : frames) {
    if (ClassifyVerb(frame.verb_lemma, lexicon) == VerbClass::kUntracked) continue;
    tracked = true;
    FlowAnnotation part = MapFrame(frame, lexicon);
    annotation.spans.insert(annotation.spans.end(), part.spans.begin(), part.spans.end());
  }
  CanonicalizeSpans(&annotation.spans);
  annotation.unprocessed = !tracked;
  if (tracked) annotation.subject_assumption = kAssumedSubject;
  return annotation;
}

inline VerbLexicon LoadVerbLexicon(const std::filesystem::path &path) {
  ConfigDocument doc = LoadConfigFile(path);
  VerbLexicon lexicon;
  auto read_set = [&](const char *section, const char *key, std::set<std::string> *out,
                      bool lower) {
    if (const ConfigValue *v = FindConfigValue(doc, section, key)) {
      out->clear();
      for (const std::string &item : v->items) out->insert(lower ? Lowercase(item) : item);
    }
  };
  auto read_role = [&](const char *section, const char *key, std::string *out) {
    if (const ConfigValue *v = FindConfigValue(doc, section, key)) {
      if (v->is_list || v->items.size() != 1) {
        throw ValidationError(path.string() + ": [" + section + "] " + key +
                              " must be a single role");
      }
      *out = v->items[0];
    }
  };
  read_set("sending", "verbs", &lexicon.sending, true);
  read_set("receiving", "verbs", &lexicon.receiving, true);
  read_role("sending", "sender", &lexicon.sending_roles.sender);
  read_role("sending", "receiver", &lexicon.sending_roles.receiver);
  read_role("receiving", "sender", &lexicon.receiving_roles.sender);
  read_role("receiving", "receiver", &lexicon.receiving_roles.receiver);
  read_set("roles", "attribute", &lexicon.attribute_roles, false);
  read_set("roles", "tp", &lexicon.tp_roles, false);
  lexicon.Validate();
  return lexicon;
}

}  // namespace ciex

#endif  // CIEXTRACT_SRL_MAPPER_HPP_
