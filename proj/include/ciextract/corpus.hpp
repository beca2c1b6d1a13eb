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

// Corpus model: statements, token spans and flow annotations, plus segment
// ingestion, sentence splitting and the JSON-lines carriers for statements
// and annotations.

#ifndef CIEXTRACT_CORPUS_HPP_
#define CIEXTRACT_CORPUS_HPP_

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "ciextract/base.hpp"
#include "json.hpp"

namespace ciex {

struct Token {
  int index = 0;
  std::string text;
  std::optional<std::string> lemma;
  std::optional<std::string> pos;

  bool operator==(const Token &) const = default;
};

struct Statement {
  std::string id;
  std::string policy_id;
  std::string segment_id;
  std::string segment_label;
  std::vector<Token> tokens;
  std::string raw_text;

  bool operator==(const Statement &) const = default;
};

// Half-open token range [start, end) labelled with a CI parameter. The
// source tag names whatever produced the span: a dependency type, an SRL
// "lemma:ROLE" pair or a tagger name.
struct Span {
  int start = 0;
  int end = 0;
  CIParam param = CIParam::kAttribute;
  std::string source_tag;

  int length() const { return end - start; }

  bool operator==(const Span &) const = default;
};

// Canonical span order: position first, then parameter and source.
inline bool SpanLess(const Span &a, const Span &b) {
  return std::tie(a.start, a.end, a.param, a.source_tag) <
         std::tie(b.start, b.end, b.param, b.source_tag);
}

inline int SharedTokens(const Span &a, const Span &b) {
  return std::max(0, std::min(a.end, b.end) - std::max(a.start, b.start));
}

// The output of the mapping function for one statement: the labelled
// (sender, receiver, subject, attribute, transmission principle) spans.
struct FlowAnnotation {
  std::string statement_id;
  std::string method;
  // Gold only: whether the statement prescribes an information exchange.
  std::optional<bool> valid;
  std::vector<Span> spans;
  // Set by the SRL mappers when no tracked predicate was found.
  bool unprocessed = false;
  // SRL emits no Subject spans and records the assumed subject instead.
  std::optional<std::string> subject_assumption;

  bool operator==(const FlowAnnotation &) const = default;
};

// Sorts spans canonically and removes spans sharing (param, start, end),
// keeping the one that sorts first.
inline void CanonicalizeSpans(std::vector<Span> *spans) {
  std::sort(spans->begin(), spans->end(), SpanLess);
  auto same_key = [](const Span &a, const Span &b) {
    return a.start == b.start && a.end == b.end && a.param == b.param;
  };
  spans->erase(std::unique(spans->begin(), spans->end(), same_key),
               spans->end());
}

// ---------------------------------------------------------------------------
// Sentence splitting and tokenization.

struct SplitOptions {
  bool split_on_colon = false;
  std::vector<std::string> abbreviations = {
      "e.g.", "i.e.", "etc.", "vs.", "mr.", "mrs.", "ms.", "dr.",
      "inc.", "ltd.", "co.", "corp.", "u.s."};
};

namespace internal {

inline bool IsAbbreviation(std::string_view word, const SplitOptions &options) {
  std::string lower = Lowercase(word);
  return std::find(options.abbreviations.begin(), options.abbreviations.end(),
                   lower) != options.abbreviations.end();
}

inline bool IsClosingMark(char c) { return c == '"' || c == '\'' || c == ')'; }

inline bool OpensSentence(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return std::isupper(u) || std::isdigit(u) || c == '"' || c == '\'' ||
         c == '(';
}

}  // namespace internal

// Rule-based splitter. A terminator (. ! ? and optionally :) ends a sentence
// when it is followed, after any closing quotes or parentheses, by whitespace
// and then an uppercase letter, digit or opening quote. Periods closing a
// guarded abbreviation never split.
inline std::vector<std::string> SplitSentences(std::string_view text,
                                               const SplitOptions &options = {}) {
  std::vector<std::string> sentences;
  size_t start = 0;
  const size_t n = text.size();
  for (size_t i = 0; i < n; ++i) {
    char c = text[i];
    bool terminator = c == '.' || c == '!' || c == '?' ||
                      (c == ':' && options.split_on_colon);
    if (!terminator) continue;
    size_t j = i + 1;
    while (j < n && internal::IsClosingMark(text[j])) ++j;
    if (j >= n || !IsSpace(text[j])) continue;
    size_t k = j;
    while (k < n && IsSpace(text[k])) ++k;
    if (k >= n || !internal::OpensSentence(text[k])) continue;
    if (c == '.') {
      size_t word_start = i;
      while (word_start > start && !IsSpace(text[word_start - 1])) --word_start;
      if (internal::IsAbbreviation(text.substr(word_start, i + 1 - word_start),
                                   options)) {
        continue;
      }
    }
    std::string_view sentence = Trim(text.substr(start, j - start));
    if (!sentence.empty()) sentences.emplace_back(sentence);
    start = j;
    i = j - 1;
  }
  std::string_view rest = Trim(text.substr(std::min(start, n)));
  if (!rest.empty()) sentences.emplace_back(rest);
  return sentences;
}

// Whitespace split, then detachment of leading ( [ " ' and trailing
// . , ; : ! ? " ' ) ] characters. Guarded abbreviations stay whole.
inline std::vector<std::string> TokenizeWords(std::string_view sentence,
                                              const SplitOptions &options = {}) {
  static constexpr std::string_view kLeading = "([\"'";
  static constexpr std::string_view kTrailing = ".,;:!?\"')]";
  std::vector<std::string> tokens;
  for (const std::string &chunk : SplitWhitespace(sentence)) {
    if (internal::IsAbbreviation(chunk, options)) {
      tokens.push_back(chunk);
      continue;
    }
    std::string_view core = chunk;
    std::vector<std::string> leading;
    while (core.size() > 1 && kLeading.find(core.front()) != std::string_view::npos) {
      leading.emplace_back(1, core.front());
      core.remove_prefix(1);
    }
    std::vector<std::string> trailing;
    while (core.size() > 1 && kTrailing.find(core.back()) != std::string_view::npos) {
      trailing.emplace_back(1, core.back());
      core.remove_suffix(1);
    }
    tokens.insert(tokens.end(), leading.begin(), leading.end());
    tokens.emplace_back(core);
    tokens.insert(tokens.end(), trailing.rbegin(), trailing.rend());
  }
  return tokens;
}

inline std::vector<Token> Tokenize(std::string_view sentence,
                                   const SplitOptions &options = {}) {
  std::vector<Token> tokens;
  int index = 0;
  for (std::string &word : TokenizeWords(sentence, options)) {
    tokens.push_back(Token{index++, std::move(word), std::nullopt, std::nullopt});
  }
  return tokens;
}

// Detokenization is concatenation: tokens reproduce the raw text once all
// whitespace is removed from both.
inline bool TokensMatchText(const std::vector<Token> &tokens,
                            std::string_view raw_text) {
  std::string joined;
  for (const Token &t : tokens) joined += t.text;
  return RemoveWhitespace(joined) == RemoveWhitespace(raw_text);
}

// ---------------------------------------------------------------------------
// Segment ingestion.

struct IngestOptions {
  std::vector<std::string> allowed_labels = {
      "First Party Collection/Use", "Third Party Sharing/Collection",
      "Data Retention"};
  SplitOptions split;
};

struct Corpus {
  std::vector<Statement> statements;
  // Segments dropped because their label is outside the allow-list.
  size_t skipped_segments = 0;
};

inline std::string StatementId(std::string_view policy_id,
                               std::string_view segment_id, size_t ordinal) {
  std::string id(policy_id);
  id += '/';
  id += segment_id;
  id += '/';
  id += std::to_string(ordinal);
  return id;
}

namespace internal {

inline bool LabelAllowed(std::string_view label,
                         const std::vector<std::string> &allowed) {
  std::string lower = Lowercase(Trim(label));
  for (const std::string &a : allowed) {
    if (Lowercase(a) == lower) return true;
  }
  return false;
}

inline std::string RequireString(const nlohmann::json &object, const char *key,
                                 const std::string &where) {
  auto it = object.find(key);
  if (it == object.end() || !it->is_string()) {
    throw ValidationError(where + ": missing or non-string field \"" + key + "\"");
  }
  return it->get<std::string>();
}

inline int RequireInt(const nlohmann::json &object, const char *key,
                      const std::string &where) {
  auto it = object.find(key);
  if (it == object.end() || !it->is_number_integer()) {
    throw ValidationError(where + ": missing or non-integer field \"" + key + "\"");
  }
  return it->get<int>();
}

inline nlohmann::json ParseJsonLine(const std::string &line,
                                    const std::string &where) {
  try {
    nlohmann::json value = nlohmann::json::parse(line);
    if (!value.is_object()) throw ValidationError(where + ": expected a JSON object");
    return value;
  } catch (const nlohmann::json::parse_error &e) {
    throw ValidationError(where + ": malformed JSON (" + e.what() + ")");
  }
}

inline std::ifstream OpenInput(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

inline std::ofstream OpenOutput(const std::filesystem::path &path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

// Calls fn(line, "path:lineno") for every non-blank line.
template <typename Fn>
void ForEachLine(const std::filesystem::path &path, Fn &&fn) {
  std::ifstream in = OpenInput(path);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    fn(line, path.string() + ":" + std::to_string(lineno));
  }
}

}  // namespace internal

// Reads one segment file and appends its statements to the corpus.
inline void IngestSegmentFile(const std::filesystem::path &path,
                              const IngestOptions &options, Corpus *corpus) {
  internal::ForEachLine(path, [&](const std::string &line, const std::string &where) {
    nlohmann::json segment = internal::ParseJsonLine(line, where);
    std::string policy_id = internal::RequireString(segment, "policy_id", where);
    std::string segment_id = internal::RequireString(segment, "segment_id", where);
    std::string label = internal::RequireString(segment, "label", where);
    std::string text = internal::RequireString(segment, "text", where);
    if (!internal::LabelAllowed(label, options.allowed_labels)) {
      ++corpus->skipped_segments;
      return;
    }
    std::vector<std::string> sentences = SplitSentences(text, options.split);
    for (size_t k = 0; k < sentences.size(); ++k) {
      Statement statement;
      statement.id = StatementId(policy_id, segment_id, k);
      statement.policy_id = policy_id;
      statement.segment_id = segment_id;
      statement.segment_label = label;
      statement.raw_text = sentences[k];
      statement.tokens = Tokenize(sentences[k], options.split);
      corpus->statements.push_back(std::move(statement));
    }
  });
}

// Ingests every *.jsonl file of a directory in file-name order.
inline Corpus IngestCorpus(const std::filesystem::path &directory,
                           const IngestOptions &options = {}) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(directory)) {
    throw IoError("not a directory: " + directory.string());
  }
  std::vector<fs::path> files;
  for (const fs::directory_entry &entry : fs::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  Corpus corpus;
  for (const fs::path &file : files) IngestSegmentFile(file, options, &corpus);
  std::set<std::string> seen;
  for (const Statement &s : corpus.statements) {
    if (!seen.insert(s.id).second) {
      throw ValidationError("duplicate statement id " + s.id);
    }
  }
  return corpus;
}

// ---------------------------------------------------------------------------
// Corpus statistics.

struct CorpusStats {
  size_t statements = 0;
  size_t valid_statements = 0;
  size_t gold_spans = 0;
  std::map<std::string, size_t> valid_per_policy;
  size_t min_valid_per_policy = 0;
  double mean_valid_per_policy = 0.0;
  size_t max_valid_per_policy = 0;

  bool operator==(const CorpusStats &) const = default;
};

inline CorpusStats ComputeCorpusStats(const std::vector<Statement> &statements,
                                      const std::vector<FlowAnnotation> &gold) {
  std::map<std::string, const Statement *> by_id;
  CorpusStats stats;
  stats.statements = statements.size();
  for (const Statement &s : statements) {
    by_id[s.id] = &s;
    stats.valid_per_policy.emplace(s.policy_id, 0);
  }
  std::vector<std::string> dangling;
  for (const FlowAnnotation &g : gold) {
    auto it = by_id.find(g.statement_id);
    if (it == by_id.end()) {
      dangling.push_back(g.statement_id);
      continue;
    }
    stats.gold_spans += g.spans.size();
    if (g.valid.value_or(false)) {
      ++stats.valid_statements;
      ++stats.valid_per_policy[it->second->policy_id];
    }
  }
  if (!dangling.empty()) {
    std::string message = "gold annotations reference unknown statements:";
    for (const std::string &id : dangling) message += " " + id;
    throw ValidationError(message);
  }
  if (!stats.valid_per_policy.empty()) {
    stats.min_valid_per_policy = SIZE_MAX;
    size_t total = 0;
    for (const auto &[policy, count] : stats.valid_per_policy) {
      stats.min_valid_per_policy = std::min(stats.min_valid_per_policy, count);
      stats.max_valid_per_policy = std::max(stats.max_valid_per_policy, count);
      total += count;
    }
    stats.mean_valid_per_policy =
        static_cast<double>(total) / stats.valid_per_policy.size();
  }
  return stats;
}

inline nlohmann::ordered_json StatsToJson(const CorpusStats &stats) {
  nlohmann::ordered_json out;
  out["statements"] = stats.statements;
  out["valid_statements"] = stats.valid_statements;
  out["gold_spans"] = stats.gold_spans;
  out["min_valid_per_policy"] = stats.min_valid_per_policy;
  out["mean_valid_per_policy"] = stats.mean_valid_per_policy;
  out["max_valid_per_policy"] = stats.max_valid_per_policy;
  nlohmann::ordered_json per_policy = nlohmann::ordered_json::object();
  for (const auto &[policy, count] : stats.valid_per_policy) {
    per_policy[policy] = count;
  }
  out["valid_per_policy"] = per_policy;
  return out;
}

// ---------------------------------------------------------------------------
// Token tags <-> spans.

// Projects spans onto one tag per token. Where spans overlap the shortest
// one wins, then the earlier parameter. Actor spans are not token tags and
// are ignored.
inline std::vector<CIParam> SpansToTags(int length, const std::vector<Span> &spans) {
  std::vector<CIParam> tags(length, CIParam::kO);
  std::vector<int> owner_length(length, INT32_MAX);
  for (const Span &span : spans) {
    if (span.param == CIParam::kActor || span.param == CIParam::kO) continue;
    for (int i = std::max(0, span.start); i < std::min(length, span.end); ++i) {
      if (span.length() < owner_length[i] ||
          (span.length() == owner_length[i] && span.param < tags[i])) {
        owner_length[i] = span.length();
        tags[i] = span.param;
      }
    }
  }
  return tags;
}

// Runs of identical non-O tags become one span each.
inline std::vector<Span> TagsToSpans(const std::vector<CIParam> &tags,
                                     const std::string &source_tag) {
  std::vector<Span> spans;
  int n = static_cast<int>(tags.size());
  int i = 0;
  while (i < n) {
    if (tags[i] == CIParam::kO) {
      ++i;
      continue;
    }
    int j = i + 1;
    while (j < n && tags[j] == tags[i]) ++j;
    spans.push_back(Span{i, j, tags[i], source_tag});
    i = j;
  }
  return spans;
}

// ---------------------------------------------------------------------------
// JSON-lines carriers.

inline nlohmann::ordered_json StatementToJson(const Statement &s) {
  nlohmann::ordered_json out;
  out["id"] = s.id;
  out["policy_id"] = s.policy_id;
  out["segment_id"] = s.segment_id;
  out["segment_label"] = s.segment_label;
  out["raw_text"] = s.raw_text;
  nlohmann::ordered_json tokens = nlohmann::ordered_json::array();
  for (const Token &t : s.tokens) tokens.push_back(t.text);
  out["tokens"] = tokens;
  return out;
}

inline void WriteStatements(const std::vector<Statement> &statements,
                            const std::filesystem::path &path) {
  std::ofstream out = internal::OpenOutput(path);
  for (const Statement &s : statements) out << StatementToJson(s).dump() << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

inline std::vector<Statement> ReadStatements(const std::filesystem::path &path) {
  std::vector<Statement> statements;
  internal::ForEachLine(path, [&](const std::string &line, const std::string &where) {
    nlohmann::json j = internal::ParseJsonLine(line, where);
    Statement s;
    s.id = internal::RequireString(j, "id", where);
    s.policy_id = internal::RequireString(j, "policy_id", where);
    s.segment_id = internal::RequireString(j, "segment_id", where);
    s.segment_label = internal::RequireString(j, "segment_label", where);
    s.raw_text = internal::RequireString(j, "raw_text", where);
    auto tokens = j.find("tokens");
    if (tokens == j.end() || !tokens->is_array()) {
      throw ValidationError(where + ": missing token array");
    }
    int index = 0;
    for (const auto &t : *tokens) {
      if (!t.is_string() || t.get<std::string>().empty()) {
        throw ValidationError(where + ": tokens must be non-empty strings");
      }
      s.tokens.push_back(Token{index++, t.get<std::string>(), std::nullopt, std::nullopt});
    }
    statements.push_back(std::move(s));
  });
  return statements;
}

inline nlohmann::ordered_json SpanToJson(const Span &span) {
  nlohmann::ordered_json out;
  out["start"] = span.start;
  out["end"] = span.end;
  out["param"] = std::string(ParamName(span.param));
  out["source_tag"] = span.source_tag;
  return out;
}

inline Span SpanFromJson(const nlohmann::json &j, const std::string &where) {
  if (!j.is_object()) throw ValidationError(where + ": span must be an object");
  Span span;
  span.start = internal::RequireInt(j, "start", where);
  span.end = internal::RequireInt(j, "end", where);
  std::string param = internal::RequireString(j, "param", where);
  std::optional<CIParam> parsed = ParseParam(param);
  if (!parsed || *parsed == CIParam::kO) {
    throw ValidationError(where + ": invalid span param \"" + param + "\"");
  }
  span.param = *parsed;
  auto tag = j.find("source_tag");
  if (tag != j.end() && tag->is_string()) span.source_tag = tag->get<std::string>();
  if (span.start < 0 || span.start >= span.end) {
    throw ValidationError(where + ": invalid span [" + std::to_string(span.start) +
                          ", " + std::to_string(span.end) + ")");
  }
  return span;
}

inline nlohmann::ordered_json AnnotationToJson(const FlowAnnotation &a) {
  nlohmann::ordered_json out;
  out["statement_id"] = a.statement_id;
  out["method"] = a.method;
  if (a.valid) {
    out["valid"] = *a.valid;
  } else {
    out["valid"] = nullptr;
  }
  nlohmann::ordered_json spans = nlohmann::ordered_json::array();
  for (const Span &s : a.spans) spans.push_back(SpanToJson(s));
  out["spans"] = spans;
  if (a.unprocessed) out["unprocessed"] = true;
  if (a.subject_assumption) out["subject_assumption"] = *a.subject_assumption;
  return out;
}

inline FlowAnnotation AnnotationFromJson(const nlohmann::json &j,
                                         const std::string &where) {
  FlowAnnotation a;
  a.statement_id = internal::RequireString(j, "statement_id", where);
  a.method = internal::RequireString(j, "method", where);
  auto valid = j.find("valid");
  if (valid != j.end() && !valid->is_null()) {
    if (!valid->is_boolean()) throw ValidationError(where + ": \"valid\" must be bool or null");
    a.valid = valid->get<bool>();
  }
  auto spans = j.find("spans");
  if (spans == j.end() || !spans->is_array()) {
    throw ValidationError(where + ": missing span array");
  }
  for (const auto &s : *spans) a.spans.push_back(SpanFromJson(s, where));
  auto unprocessed = j.find("unprocessed");
  if (unprocessed != j.end() && unprocessed->is_boolean()) {
    a.unprocessed = unprocessed->get<bool>();
  }
  auto subject = j.find("subject_assumption");
  if (subject != j.end() && subject->is_string()) {
    a.subject_assumption = subject->get<std::string>();
  }
  return a;
}

inline void WriteAnnotations(const std::vector<FlowAnnotation> &annotations,
                             const std::filesystem::path &path) {
  std::ofstream out = internal::OpenOutput(path);
  for (const FlowAnnotation &a : annotations) out << AnnotationToJson(a).dump() << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

inline std::vector<FlowAnnotation> ReadAnnotations(const std::filesystem::path &path) {
  std::vector<FlowAnnotation> annotations;
  internal::ForEachLine(path, [&](const std::string &line, const std::string &where) {
    annotations.push_back(AnnotationFromJson(internal::ParseJsonLine(line, where), where));
  });
  return annotations;
}

}  // namespace ciex

#endif  // CIEXTRACT_CORPUS_HPP_
