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

// Readers and writers for the formats that connect the core to external
// taggers and parsers:
//
//   CoNLL-2003  token and CI label columns, blank-line sentence breaks
//   CoNLL-U     10-column dependency trees with "# sent_id =" comments
//   SRL frames  JSON lines, one predicate with its arguments per line
//
// All readers reject out-of-bounds indices instead of clamping them.

#ifndef CIEXTRACT_INTERCHANGE_HPP_
#define CIEXTRACT_INTERCHANGE_HPP_

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ciextract/base.hpp"
#include "ciextract/corpus.hpp"
#include "json.hpp"

namespace ciex {

// One tag per token, drawn from the five parameters and O.
struct TaggedSentence {
  std::string statement_id;
  std::vector<Token> tokens;
  std::vector<CIParam> tags;

  bool operator==(const TaggedSentence &) const = default;
};

// Dependency tree with 0-based heads; the root's head is kRootHead.
struct DepTree {
  static constexpr int kRootHead = -1;

  std::string statement_id;
  std::vector<Token> tokens;
  std::vector<int> heads;
  std::vector<std::string> dep_types;

  int size() const { return static_cast<int>(tokens.size()); }

  int root() const {
    for (int i = 0; i < size(); ++i) {
      if (heads[i] == kRootHead) return i;
    }
    return -1;
  }

  std::vector<std::vector<int>> Children() const {
    std::vector<std::vector<int>> children(tokens.size());
    for (int i = 0; i < size(); ++i) {
      if (heads[i] != kRootHead) children[heads[i]].push_back(i);
    }
    return children;
  }
};

struct SrlArgument {
  std::string role;
  int start = 0;
  int end = 0;

  bool operator==(const SrlArgument &) const = default;
};

// One verb predicate with its role-labelled argument spans.
struct SrlFrame {
  std::string statement_id;
  int sentence_len = 0;
  int verb_index = 0;
  std::string verb_lemma;
  std::vector<SrlArgument> arguments;

  bool operator==(const SrlFrame &) const = default;
};

// ---------------------------------------------------------------------------
// CoNLL-2003.

// Accepts the bare CI labels only; BIO prefixes are rejected.
inline std::optional<CIParam> ParseTag(std::string_view label) {
  std::optional<CIParam> param = ParseParam(label);
  if (!param || *param == CIParam::kActor) return std::nullopt;
  return param;
}

inline std::vector<TaggedSentence> ReadConll2003(const std::filesystem::path &path) {
  std::ifstream in = internal::OpenInput(path);
  std::vector<TaggedSentence> sentences;
  TaggedSentence current;
  std::string pending_id;
  size_t ordinal = 0;
  auto flush = [&] {
    if (current.tokens.empty()) return;
    ++ordinal;
    current.statement_id =
        pending_id.empty() ? "sent-" + std::to_string(ordinal) : pending_id;
    pending_id.clear();
    sentences.push_back(std::move(current));
    current = TaggedSentence{};
  };
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string where = path.string() + ":" + std::to_string(lineno);
    if (Trim(line).empty()) {
      flush();
      continue;
    }
    if (line.rfind("# sent_id =", 0) == 0) {
      flush();
      pending_id = std::string(Trim(std::string_view(line).substr(11)));
      continue;
    }
    std::vector<std::string> columns = SplitWhitespace(line);
    if (!columns.empty() && columns[0] == "-DOCSTART-") {
      flush();
      continue;
    }
    if (columns.size() != 2) {
      throw ValidationError(where + ": expected 2 columns (token, label), found " +
                            std::to_string(columns.size()));
    }
    std::optional<CIParam> tag = ParseTag(columns[1]);
    if (!tag) throw ValidationError(where + ": unknown label \"" + columns[1] + "\"");
    int index = static_cast<int>(current.tokens.size());
    current.tokens.push_back(Token{index, columns[0], std::nullopt, std::nullopt});
    current.tags.push_back(*tag);
  }
  flush();
  return sentences;
}

inline void WriteConll2003(const std::vector<TaggedSentence> &sentences,
                           const std::filesystem::path &path) {
  std::ofstream out = internal::OpenOutput(path);
  for (const TaggedSentence &s : sentences) {
    if (s.tokens.size() != s.tags.size()) {
      throw ValidationError(s.statement_id + ": token/tag length mismatch");
    }
    out << "# sent_id = " << s.statement_id << '\n';
    for (size_t i = 0; i < s.tokens.size(); ++i) {
      out << s.tokens[i].text << '\t' << ParamName(s.tags[i]) << '\n';
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

// ---------------------------------------------------------------------------
// CoNLL-U.

// Checks single root, parent bounds and acyclicity.
inline void ValidateTree(const DepTree &tree, const std::string &where) {
  int n = tree.size();
  if (n == 0) throw ValidationError(where + ": empty sentence");
  if (static_cast<int>(tree.heads.size()) != n ||
      static_cast<int>(tree.dep_types.size()) != n) {
    throw ValidationError(where + ": heads/dep_types length mismatch");
  }
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    int h = tree.heads[i];
    if (h == DepTree::kRootHead) {
      ++roots;
    } else if (h < 0 || h >= n || h == i) {
      throw ValidationError(where + ": token " + std::to_string(i + 1) +
                            " has invalid head");
    }
  }
  if (roots != 1) {
    throw ValidationError(where + ": expected exactly one root, found " +
                          std::to_string(roots));
  }
  for (int i = 0; i < n; ++i) {
    int node = i;
    for (int steps = 0; node != DepTree::kRootHead; ++steps) {
      if (steps > n) {
        throw ValidationError(where + ": cyclic heads at token " + std::to_string(i + 1));
      }
      node = tree.heads[node];
    }
  }
}

inline std::vector<DepTree> ReadConllu(const std::filesystem::path &path) {
  std::ifstream in = internal::OpenInput(path);
  std::vector<DepTree> trees;
  DepTree current;
  bool has_id = false;
  size_t start_line = 0;
  auto flush = [&] {
    if (current.tokens.empty()) {
      has_id = false;
      return;
    }
    std::string where = path.string() + ":" + std::to_string(start_line);
    if (!has_id) throw ValidationError(where + ": sentence without \"# sent_id\"");
    ValidateTree(current, where + " (" + current.statement_id + ")");
    trees.push_back(std::move(current));
    current = DepTree{};
    has_id = false;
  };
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string where = path.string() + ":" + std::to_string(lineno);
    if (Trim(line).empty()) {
      flush();
      continue;
    }
    if (start_line == 0 || (current.tokens.empty() && !has_id)) start_line = lineno;
    if (line[0] == '#') {
      if (line.rfind("# sent_id =", 0) == 0) {
        current.statement_id = std::string(Trim(std::string_view(line).substr(11)));
        has_id = !current.statement_id.empty();
      }
      continue;
    }
    std::vector<std::string> columns = SplitOn(line, '\t');
    if (columns.size() != 10) {
      throw ValidationError(where + ": expected 10 tab-separated columns, found " +
                            std::to_string(columns.size()));
    }
    const std::string &id = columns[0];
    if (id.find('-') != std::string::npos || id.find('.') != std::string::npos) {
      continue;  // multiword token or empty node
    }
    int expected = current.size() + 1;
    int head = 0;
    try {
      size_t used = 0;
      if (std::stoi(id, &used) != expected || used != id.size()) {
        throw ValidationError(where + ": expected token id " + std::to_string(expected));
      }
      head = std::stoi(columns[6], &used);
      if (used != columns[6].size()) throw std::invalid_argument("head");
    } catch (const std::logic_error &) {
      throw ValidationError(where + ": non-numeric ID or HEAD");
    }
    if (columns[1].empty() || columns[1] == "_") {
      throw ValidationError(where + ": empty FORM");
    }
    Token token{current.size(), columns[1], std::nullopt, std::nullopt};
    if (columns[2] != "_") token.lemma = columns[2];
    if (columns[3] != "_") token.pos = columns[3];
    current.tokens.push_back(std::move(token));
    current.heads.push_back(head - 1);
    current.dep_types.push_back(columns[7]);
  }
  flush();
  return trees;
}

inline void WriteConllu(const std::vector<DepTree> &trees,
                        const std::filesystem::path &path) {
  std::ofstream out = internal::OpenOutput(path);
  for (const DepTree &tree : trees) {
    out << "# sent_id = " << tree.statement_id << '\n';
    for (int i = 0; i < tree.size(); ++i) {
      const Token &t = tree.tokens[i];
      out << (i + 1) << '\t' << t.text << '\t' << t.lemma.value_or("_") << '\t'
          << t.pos.value_or("_") << "\t_\t_\t" << (tree.heads[i] + 1) << '\t'
          << tree.dep_types[i] << "\t_\t_\n";
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

// ---------------------------------------------------------------------------
// SRL frames.

inline void ValidateFrame(const SrlFrame &frame, const std::string &where) {
  if (frame.sentence_len <= 0) {
    throw ValidationError(where + ": sentence_len must be positive");
  }
  if (frame.verb_index < 0 || frame.verb_index >= frame.sentence_len) {
    throw ValidationError(where + ": verb_index " + std::to_string(frame.verb_index) +
                          " out of bounds for sentence_len " +
                          std::to_string(frame.sentence_len));
  }
  for (const SrlArgument &arg : frame.arguments) {
    if (arg.start < 0 || arg.start >= arg.end || arg.end > frame.sentence_len) {
      throw ValidationError(where + ": argument " + arg.role + " [" +
                            std::to_string(arg.start) + ", " + std::to_string(arg.end) +
                            ") out of bounds for sentence_len " +
                            std::to_string(frame.sentence_len));
    }
    if (arg.start <= frame.verb_index && frame.verb_index < arg.end) {
      throw ValidationError(where + ": argument " + arg.role +
                            " contains its own predicate");
    }
  }
}

inline nlohmann::ordered_json FrameToJson(const SrlFrame &frame) {
  nlohmann::ordered_json out;
  out["statement_id"] = frame.statement_id;
  out["sentence_len"] = frame.sentence_len;
  out["verb_index"] = frame.verb_index;
  out["verb_lemma"] = frame.verb_lemma;
  nlohmann::ordered_json args = nlohmann::ordered_json::array();
  for (const SrlArgument &a : frame.arguments) {
    nlohmann::ordered_json arg;
    arg["role"] = a.role;
    arg["start"] = a.start;
    arg["end"] = a.end;
    args.push_back(arg);
  }
  out["arguments"] = args;
  return out;
}

inline SrlFrame FrameFromJson(const nlohmann::json &j, const std::string &where) {
  SrlFrame frame;
  frame.statement_id = internal::RequireString(j, "statement_id", where);
  frame.sentence_len = internal::RequireInt(j, "sentence_len", where);
  frame.verb_index = internal::RequireInt(j, "verb_index", where);
  frame.verb_lemma = internal::RequireString(j, "verb_lemma", where);
  auto args = j.find("arguments");
  if (args == j.end() || !args->is_array()) {
    throw ValidationError(where + ": missing argument array");
  }
  for (const auto &a : *args) {
    if (!a.is_object()) throw ValidationError(where + ": argument must be an object");
    frame.arguments.push_back(SrlArgument{internal::RequireString(a, "role", where),
                                          internal::RequireInt(a, "start", where),
                                          internal::RequireInt(a, "end", where)});
  }
  ValidateFrame(frame, where);
  return frame;
}

inline std::vector<SrlFrame> ReadSrlFrames(const std::filesystem::path &path) {
  std::vector<SrlFrame> frames;
  internal::ForEachLine(path, [&](const std::string &line, const std::string &where) {
    frames.push_back(FrameFromJson(internal::ParseJsonLine(line, where), where));
  });
  return frames;
}

inline void WriteSrlFrames(const std::vector<SrlFrame> &frames,
                           const std::filesystem::path &path) {
  std::ofstream out = internal::OpenOutput(path);
  for (const SrlFrame &f : frames) {
    ValidateFrame(f, f.statement_id);
    out << FrameToJson(f).dump() << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

// Groups frames by statement id, preserving first-appearance order.
inline std::vector<std::vector<SrlFrame>> GroupFramesByStatement(
    const std::vector<SrlFrame> &frames) {
  std::vector<std::vector<SrlFrame>> groups;
  std::map<std::string, size_t> slot;
  for (const SrlFrame &f : frames) {
    auto [it, inserted] = slot.emplace(f.statement_id, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(f);
  }
  return groups;
}

}  // namespace ciex

#endif  // CIEXTRACT_INTERCHANGE_HPP_
