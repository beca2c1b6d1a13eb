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

// Minimal reader for the sectioned key/value files used for mapping rules
// and verb lexicons:
//
//   # comment
//   [section]
//   key = "value"
//   list = ["a", "b",
//           "c"]
//   flag = true
//
// Only strings, bare words and (possibly multi-line) string lists are
// understood, which is all the rule files need.

#ifndef CIEXTRACT_CONFIG_HPP_
#define CIEXTRACT_CONFIG_HPP_

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ciextract/base.hpp"
#include "ciextract/corpus.hpp"

namespace ciex {

struct ConfigValue {
  std::vector<std::string> items;
  bool is_list = false;
};

using ConfigSection = std::map<std::string, ConfigValue>;
using ConfigDocument = std::map<std::string, ConfigSection>;

namespace internal {

// Removes a trailing comment that is not inside a quoted string.
inline std::string StripComment(const std::string &line) {
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

inline std::vector<std::string> ParseListItems(std::string_view body,
                                               const std::string &where) {
  std::vector<std::string> items;
  size_t i = 0;
  while (i < body.size()) {
    while (i < body.size() && (IsSpace(body[i]) || body[i] == ',')) ++i;
    if (i >= body.size()) break;
    if (body[i] == '"') {
      size_t close = body.find('"', i + 1);
      if (close == std::string_view::npos) {
        throw ValidationError(where + ": unterminated string");
      }
      items.emplace_back(body.substr(i + 1, close - i - 1));
      i = close + 1;
    } else {
      size_t stop = i;
      while (stop < body.size() && body[stop] != ',' && !IsSpace(body[stop])) ++stop;
      items.emplace_back(body.substr(i, stop - i));
      i = stop;
    }
  }
  return items;
}

}  // namespace internal

inline ConfigDocument ParseConfigText(std::string_view text, const std::string &origin) {
  ConfigDocument doc;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string where = origin + ":" + std::to_string(lineno);
    std::string line(Trim(internal::StripComment(raw)));
    if (line.empty()) continue;
    if (line.front() == '[' && line.find('=') == std::string::npos) {
      if (line.back() != ']') throw ValidationError(where + ": malformed section header");
      section = std::string(Trim(std::string_view(line).substr(1, line.size() - 2)));
      doc[section];
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError(where + ": expected key = value");
    std::string key(Trim(std::string_view(line).substr(0, eq)));
    std::string value(Trim(std::string_view(line).substr(eq + 1)));
    if (key.empty()) throw ValidationError(where + ": empty key");
    ConfigValue parsed;
    if (!value.empty() && value.front() == '[') {
      parsed.is_list = true;
      std::string body = value.substr(1);
      while (body.find(']') == std::string::npos) {
        if (!std::getline(in, raw)) throw ValidationError(where + ": unterminated list");
        ++lineno;
        body += ' ' + internal::StripComment(raw);
      }
      body = body.substr(0, body.find(']'));
      parsed.items = internal::ParseListItems(body, where);
    } else {
      parsed.items = internal::ParseListItems(value, where);
      if (parsed.items.size() != 1) {
        throw ValidationError(where + ": expected a single value for " + key);
      }
    }
    doc[section][key] = std::move(parsed);
  }
  return doc;
}

inline ConfigDocument LoadConfigFile(const std::filesystem::path &path) {
  std::ifstream in = internal::OpenInput(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfigText(buffer.str(), path.string());
}

inline const ConfigValue *FindConfigValue(const ConfigDocument &doc,
                                          const std::string &section,
                                          const std::string &key) {
  auto s = doc.find(section);
  if (s == doc.end()) return nullptr;
  auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

inline bool ConfigBool(const ConfigValue &value, const std::string &name) {
  if (value.items.size() == 1 && value.items[0] == "true") return true;
  if (value.items.size() == 1 && value.items[0] == "false") return false;
  throw ValidationError(name + " must be true or false");
}

}  // namespace ciex

#endif  // CIEXTRACT_CONFIG_HPP_
