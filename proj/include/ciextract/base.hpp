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

// Shared error types, the CI parameter enumeration and small string helpers.

#ifndef CIEXTRACT_BASE_HPP_
#define CIEXTRACT_BASE_HPP_

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ciex {

// Errors carry a kind so the command line driver can map them onto exit
// codes: validation problems exit with 1, I/O problems with 2.
class Error : public std::runtime_error {
 public:
  enum class Kind { kValidation, kIo };

  Error(Kind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

inline Error ValidationError(const std::string &message) {
  return Error(Error::Kind::kValidation, message);
}

inline Error IoError(const std::string &message) {
  return Error(Error::Kind::kIo, message);
}

// The five contextual integrity parameters plus two bookkeeping values.
// Actor is the merged sender-or-receiver label produced only by the
// dependency mapper. O marks tokens outside any parameter and only occurs in
// token-level tag sequences.
enum class CIParam { kSender, kReceiver, kSubject, kAttribute, kTP, kActor, kO };

inline constexpr std::array<CIParam, 5> kScoredParams = {
    CIParam::kSender, CIParam::kReceiver, CIParam::kSubject,
    CIParam::kAttribute, CIParam::kTP};

inline std::string_view ParamName(CIParam param) {
  switch (param) {
    case CIParam::kSender: return "Sender";
    case CIParam::kReceiver: return "Receiver";
    case CIParam::kSubject: return "Subject";
    case CIParam::kAttribute: return "Attribute";
    case CIParam::kTP: return "TP";
    case CIParam::kActor: return "Actor";
    case CIParam::kO: return "O";
  }
  return "?";
}

inline std::optional<CIParam> ParseParam(std::string_view name) {
  for (CIParam p : {CIParam::kSender, CIParam::kReceiver, CIParam::kSubject,
                    CIParam::kAttribute, CIParam::kTP, CIParam::kActor,
                    CIParam::kO}) {
    if (ParamName(p) == name) return p;
  }
  return std::nullopt;
}

inline std::string Lowercase(std::string_view text) {
  std::string out(text);
  for (char &c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

inline bool IsSpace(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

inline std::string_view Trim(std::string_view text) {
  size_t begin = 0;
  while (begin < text.size() && IsSpace(text[begin])) ++begin;
  size_t end = text.size();
  while (end > begin && IsSpace(text[end - 1])) --end;
  return text.substr(begin, end - begin);
}

// Splits on runs of whitespace; never yields empty fields.
inline std::vector<std::string> SplitWhitespace(std::string_view text) {
  std::vector<std::string> fields;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(text[i])) ++i;
    size_t start = i;
    while (i < text.size() && !IsSpace(text[i])) ++i;
    if (i > start) fields.emplace_back(text.substr(start, i - start));
  }
  return fields;
}

inline std::vector<std::string> SplitOn(std::string_view text, char sep) {
  std::vector<std::string> fields;
  size_t start = 0;
  for (;;) {
    size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.emplace_back(text.substr(start));
      return fields;
    }
    fields.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string RemoveWhitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (!IsSpace(c)) out.push_back(c);
  }
  return out;
}

}  // namespace ciex

#endif  // CIEXTRACT_BASE_HPP_
