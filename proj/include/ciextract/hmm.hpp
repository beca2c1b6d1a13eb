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

// Trigram hidden Markov model over CI tags.
//
// Transitions linearly interpolate trigram, bigram and unigram maximum
// likelihood estimates:
//
//   P(t | t2, t1) = l1 * P3(t | t2, t1) + l2 * P2(t | t1) + (1 - l1 - l2) * P1(t)
//
// Sentences are padded with two start symbols and closed by a stop symbol.
// Both are represented by a single boundary symbol: it only appears as a
// start in contexts and only as a stop in outcomes. Emissions are
// estimated on lowercased words with training hapaxes folded into <unk>.

#ifndef CIEXTRACT_HMM_HPP_
#define CIEXTRACT_HMM_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "ciextract/base.hpp"
#include "ciextract/interchange.hpp"
#include "json.hpp"

namespace ciex {

inline constexpr std::array<CIParam, 6> kHmmTagset = {
    CIParam::kSender, CIParam::kReceiver, CIParam::kSubject,
    CIParam::kAttribute, CIParam::kTP, CIParam::kO};

inline constexpr int kNumTags = static_cast<int>(kHmmTagset.size());
inline constexpr int kNumSymbols = kNumTags + 1;
inline constexpr const char *kUnkToken = "<unk>";
inline constexpr double kDefaultLambda1 = 0.42;
inline constexpr double kDefaultLambda2 = 0.48;

// A tag of the HMM tagset, or the sentence boundary.
class HmmSymbol {
 public:
  static constexpr HmmSymbol Boundary() { return HmmSymbol(kNumTags); }

  static HmmSymbol Of(CIParam param) {
    for (int i = 0; i < kNumTags; ++i) {
      if (kHmmTagset[i] == param) return HmmSymbol(i);
    }
    throw ValidationError("tag " + std::string(ParamName(param)) +
                          " is not in the HMM tagset");
  }

  static HmmSymbol FromIndex(int index) {
    if (index < 0 || index > kNumTags) {
      throw ValidationError("HMM symbol index out of range");
    }
    return HmmSymbol(index);
  }

  int index() const { return index_; }
  bool is_boundary() const { return index_ == kNumTags; }
  CIParam tag() const { return kHmmTagset[index_]; }

  bool operator==(const HmmSymbol &) const = default;

 private:
  constexpr explicit HmmSymbol(int index) : index_(index) {}
  int index_;
};

// Raw counts. Outcome and context indices are HmmSymbol indices.
struct HmmCounts {
  using Row = std::array<int64_t, kNumSymbols>;

  Row unigram{};
  std::array<Row, kNumSymbols> bigram{};
  std::array<std::array<Row, kNumSymbols>, kNumSymbols> trigram{};
  std::map<std::string, std::array<int64_t, kNumTags>> emission;

  bool operator==(const HmmCounts &) const = default;
};

class HmmModel {
 public:
  HmmModel(HmmCounts counts, double lambda1, double lambda2)
      : counts_(std::move(counts)), lambda1_(lambda1), lambda2_(lambda2) {
    CheckLambdas(lambda1, lambda2);
    Estimate();
  }

  static void CheckLambdas(double lambda1, double lambda2) {
    if (!(lambda1 >= 0.0 && lambda2 >= 0.0)) {
      throw ValidationError("interpolation weights must be non-negative");
    }
    if (lambda1 + lambda2 > 1.0 + 1e-12) {
      throw ValidationError("interpolation weights must satisfy lambda1 + lambda2 <= 1 (got " +
                            std::to_string(lambda1) + " + " + std::to_string(lambda2) + ")");
    }
  }

  HmmModel WithLambdas(double lambda1, double lambda2) const {
    return HmmModel(counts_, lambda1, lambda2);
  }

  const HmmCounts &counts() const { return counts_; }
  double lambda1() const { return lambda1_; }
  double lambda2() const { return lambda2_; }

  double UnigramP(HmmSymbol outcome) const { return unigram_p_[outcome.index()]; }
  double BigramP(HmmSymbol prev, HmmSymbol outcome) const {
    return bigram_p_[prev.index()][outcome.index()];
  }
  double TrigramP(HmmSymbol prev2, HmmSymbol prev1, HmmSymbol outcome) const {
    return trigram_p_[prev2.index()][prev1.index()][outcome.index()];
  }
  bool BigramContextSeen(HmmSymbol prev) const { return bigram_seen_[prev.index()]; }
  bool TrigramContextSeen(HmmSymbol prev2, HmmSymbol prev1) const {
    return trigram_seen_[prev2.index()][prev1.index()];
  }

  // Interpolated P(outcome | prev2, prev1). Unseen contexts contribute zero
  // from their component.
  double Transition(HmmSymbol prev2, HmmSymbol prev1, HmmSymbol outcome) const {
    return lambda1_ * TrigramP(prev2, prev1, outcome) +
           lambda2_ * BigramP(prev1, outcome) +
           std::max(0.0, 1.0 - lambda1_ - lambda2_) * UnigramP(outcome);
  }

  double LogTransition(int prev2, int prev1, int outcome) const {
    return log_transition_[prev2][prev1][outcome];
  }

  // P(word | tag) for each tag, after lowercasing and <unk> folding.
  std::array<double, kNumTags> Emission(const std::string &word) const {
    auto it = emission_p_.find(Lowercase(word));
    if (it == emission_p_.end()) it = emission_p_.find(kUnkToken);
    if (it == emission_p_.end()) return {};
    return it->second;
  }

  bool operator==(const HmmModel &other) const {
    return counts_ == other.counts_ && lambda1_ == other.lambda1_ &&
           lambda2_ == other.lambda2_;
  }

 private:
  void Estimate() {
    int64_t total = 0;
    for (int64_t c : counts_.unigram) total += c;
    for (int o = 0; o < kNumSymbols; ++o) {
      unigram_p_[o] = total > 0 ? static_cast<double>(counts_.unigram[o]) / total : 0.0;
    }
    for (int p = 0; p < kNumSymbols; ++p) {
      int64_t context = 0;
      for (int64_t c : counts_.bigram[p]) context += c;
      bigram_seen_[p] = context > 0;
      for (int o = 0; o < kNumSymbols; ++o) {
        bigram_p_[p][o] =
            context > 0 ? static_cast<double>(counts_.bigram[p][o]) / context : 0.0;
      }
    }
    for (int p2 = 0; p2 < kNumSymbols; ++p2) {
      for (int p1 = 0; p1 < kNumSymbols; ++p1) {
        const auto &row = counts_.trigram[p2][p1];
        int64_t context = 0;
        for (int64_t c : row) context += c;
        trigram_seen_[p2][p1] = context > 0;
        for (int o = 0; o < kNumSymbols; ++o) {
          trigram_p_[p2][p1][o] = context > 0 ? static_cast<double>(row[o]) / context : 0.0;
        }
      }
    }
    for (int p2 = 0; p2 < kNumSymbols; ++p2) {
      for (int p1 = 0; p1 < kNumSymbols; ++p1) {
        for (int o = 0; o < kNumSymbols; ++o) {
          log_transition_[p2][p1][o] =
              std::log(Transition(HmmSymbol::FromIndex(p2), HmmSymbol::FromIndex(p1),
                                  HmmSymbol::FromIndex(o)));
        }
      }
    }
    std::array<int64_t, kNumTags> tag_totals{};
    for (const auto &[word, row] : counts_.emission) {
      for (int t = 0; t < kNumTags; ++t) tag_totals[t] += row[t];
    }
    emission_p_.clear();
    for (const auto &[word, row] : counts_.emission) {
      std::array<double, kNumTags> p{};
      for (int t = 0; t < kNumTags; ++t) {
        p[t] = tag_totals[t] > 0 ? static_cast<double>(row[t]) / tag_totals[t] : 0.0;
      }
      emission_p_.emplace(word, p);
    }
  }

  HmmCounts counts_;
  double lambda1_;
  double lambda2_;
  std::array<double, kNumSymbols> unigram_p_{};
  std::array<std::array<double, kNumSymbols>, kNumSymbols> bigram_p_{};
  std::array<std::array<std::array<double, kNumSymbols>, kNumSymbols>, kNumSymbols>
      trigram_p_{};
  std::array<bool, kNumSymbols> bigram_seen_{};
  std::array<std::array<bool, kNumSymbols>, kNumSymbols> trigram_seen_{};
  std::array<std::array<std::array<double, kNumSymbols>, kNumSymbols>, kNumSymbols>
      log_transition_{};
  std::map<std::string, std::array<double, kNumTags>> emission_p_;
};

inline double InterpolatedTransition(const HmmModel &model, HmmSymbol prev2,
                                     HmmSymbol prev1, HmmSymbol outcome) {
  return model.Transition(prev2, prev1, outcome);
}

// Maximum likelihood training. Tokens are lowercased and words seen once
// are replaced by <unk> before emission counting.
inline HmmModel TrainHmm(const std::vector<TaggedSentence> &sentences,
                         double lambda1 = kDefaultLambda1,
                         double lambda2 = kDefaultLambda2) {
  if (sentences.empty()) throw ValidationError("empty training set");
  HmmModel::CheckLambdas(lambda1, lambda2);
  std::map<std::string, int64_t> frequency;
  for (const TaggedSentence &s : sentences) {
    if (s.tokens.size() != s.tags.size()) {
      throw ValidationError(s.statement_id + ": token/tag length mismatch");
    }
    for (const Token &t : s.tokens) ++frequency[Lowercase(t.text)];
  }
  HmmCounts counts;
  const int boundary = HmmSymbol::Boundary().index();
  for (const TaggedSentence &s : sentences) {
    std::vector<int> seq = {boundary, boundary};
    for (CIParam tag : s.tags) seq.push_back(HmmSymbol::Of(tag).index());
    seq.push_back(boundary);
    for (size_t i = 2; i < seq.size(); ++i) {
      ++counts.unigram[seq[i]];
      ++counts.bigram[seq[i - 1]][seq[i]];
      ++counts.trigram[seq[i - 2]][seq[i - 1]][seq[i]];
    }
    for (size_t i = 0; i < s.tokens.size(); ++i) {
      std::string word = Lowercase(s.tokens[i].text);
      if (frequency[word] == 1) word = kUnkToken;
      ++counts.emission[word][seq[i + 2]];
    }
  }
  return HmmModel(std::move(counts), lambda1, lambda2);
}

// Used when no tag sequence has non-zero probability: each token gets the
// tag maximising P(t) * P(word | t), or P(t) alone if that is zero too.
inline std::vector<CIParam> UnigramFallback(const HmmModel &model,
                                            const std::vector<std::string> &tokens) {
  std::vector<CIParam> tags;
  for (const std::string &token : tokens) {
    std::array<double, kNumTags> e = model.Emission(token);
    int best = 0;
    double best_score = -1.0;
    bool any = false;
    for (int t = 0; t < kNumTags; ++t) any |= e[t] * model.UnigramP(HmmSymbol::FromIndex(t)) > 0;
    for (int t = 0; t < kNumTags; ++t) {
      double p = model.UnigramP(HmmSymbol::FromIndex(t));
      double score = any ? p * e[t] : p;
      if (score > best_score) {
        best_score = score;
        best = t;
      }
    }
    tags.push_back(kHmmTagset[best]);
  }
  return tags;
}

// Returns the tag sequence maximising the joint probability. Among equally
// scored sequences the lexicographically smallest in tagset order wins,
// i.e. at the first position where they differ the earlier-listed tag is
// chosen. Scores are log-space; a sequence's score is accumulated from the
// last position backwards.
inline std::vector<CIParam> ViterbiDecode(const HmmModel &model,
                                          const std::vector<std::string> &tokens) {
  const int n = static_cast<int>(tokens.size());
  if (n == 0) throw ValidationError("cannot decode an empty sentence");
  constexpr int B = kNumTags;
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

  std::vector<std::array<double, kNumTags>> log_emission(n);
  for (int k = 0; k < n; ++k) {
    std::array<double, kNumTags> e = model.Emission(tokens[k]);
    for (int t = 0; t < kNumTags; ++t) log_emission[k][t] = std::log(e[t]);
  }

  // suffix[k][u][v]: best score of positions k+1..n and the stop transition,
  // given tags u at k-1 and v at k. u ranges over tags and the boundary.
  using Table = std::array<std::array<double, kNumTags>, kNumSymbols>;
  std::vector<Table> suffix(n);
  for (int u = 0; u < kNumSymbols; ++u) {
    for (int v = 0; v < kNumTags; ++v) suffix[n - 1][u][v] = model.LogTransition(u, v, B);
  }
  for (int k = n - 2; k >= 0; --k) {
    for (int u = 0; u < kNumSymbols; ++u) {
      for (int v = 0; v < kNumTags; ++v) {
        double best = kNegInf;
        for (int w = 0; w < kNumTags; ++w) {
          double score = (model.LogTransition(u, v, w) + log_emission[k + 1][w]) +
                         suffix[k + 1][v][w];
          if (score > best) best = score;
        }
        suffix[k][u][v] = best;
      }
    }
  }

  // Forward pass picks the first tag achieving the optimum at each step.
  std::vector<int> path;
  path.reserve(n);
  double best = kNegInf;
  for (int v = 0; v < kNumTags; ++v) {
    double score = (model.LogTransition(B, B, v) + log_emission[0][v]) + suffix[0][B][v];
    if (score > best) best = score;
  }
  if (best == kNegInf) return UnigramFallback(model, tokens);
  int prev2 = B;
  int prev1 = B;
  double target = best;
  for (int k = 0; k < n; ++k) {
    int chosen = -1;
    for (int v = 0; v < kNumTags && chosen < 0; ++v) {
      double score =
          (model.LogTransition(prev2, prev1, v) + log_emission[k][v]) + suffix[k][prev1][v];
      if (score == target) chosen = v;
    }
    if (chosen < 0) throw std::logic_error("viterbi backtrace lost the optimum");
    path.push_back(chosen);
    target = suffix[k][prev1][chosen];
    prev2 = prev1;
    prev1 = chosen;
  }
  std::vector<CIParam> tags;
  tags.reserve(n);
  for (int t : path) tags.push_back(kHmmTagset[t]);
  return tags;
}

inline std::vector<CIParam> ViterbiDecode(const HmmModel &model,
                                          const std::vector<Token> &tokens) {
  std::vector<std::string> words;
  for (const Token &t : tokens) words.push_back(t.text);
  return ViterbiDecode(model, words);
}

inline std::vector<TaggedSentence> TagSentences(const HmmModel &model,
                                                const std::vector<TaggedSentence> &input) {
  std::vector<TaggedSentence> out;
  out.reserve(input.size());
  for (const TaggedSentence &s : input) {
    out.push_back(TaggedSentence{s.statement_id, s.tokens, ViterbiDecode(model, s.tokens)});
  }
  return out;
}

inline double TokenAccuracy(const HmmModel &model,
                            const std::vector<TaggedSentence> &gold) {
  size_t correct = 0;
  size_t total = 0;
  for (const TaggedSentence &s : gold) {
    std::vector<CIParam> predicted = ViterbiDecode(model, s.tokens);
    for (size_t i = 0; i < predicted.size(); ++i) correct += predicted[i] == s.tags[i];
    total += predicted.size();
  }
  return total > 0 ? static_cast<double>(correct) / total : 0.0;
}

struct TunedLambdas {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double accuracy = 0.0;
};

// Grid search over (i * step, j * step) with lambda1 + lambda2 <= 1. Ties go
// to the smaller lambda1, then the smaller lambda2.
inline TunedLambdas TuneLambdas(const std::vector<TaggedSentence> &train,
                                const std::vector<TaggedSentence> &validation,
                                double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 0.5)) {
    throw ValidationError("grid step must lie in (0, 0.5]");
  }
  if (validation.empty()) throw ValidationError("empty validation set");
  HmmModel base = TrainHmm(train, 0.0, 0.0);
  const int steps = static_cast<int>(std::floor(1.0 / grid_step + 1e-9));
  TunedLambdas best;
  best.accuracy = -1.0;
  for (int i = 0; i <= steps; ++i) {
    double l1 = std::min(1.0, i * grid_step);
    for (int j = 0; i + j <= steps; ++j) {
      double l2 = std::min(1.0 - l1, j * grid_step);
      double accuracy = TokenAccuracy(base.WithLambdas(l1, l2), validation);
      if (accuracy > best.accuracy) best = TunedLambdas{l1, l2, accuracy};
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Serialization: versioned JSON with nested count maps.

namespace internal {

inline std::string ContextName(int index) {
  return index == kNumTags ? "<s>" : std::string(ParamName(kHmmTagset[index]));
}

inline std::string OutcomeName(int index) {
  return index == kNumTags ? "</s>" : std::string(ParamName(kHmmTagset[index]));
}

inline int SymbolFromName(const std::string &name, bool context) {
  if (name == (context ? "<s>" : "</s>")) return kNumTags;
  for (int i = 0; i < kNumTags; ++i) {
    if (ParamName(kHmmTagset[i]) == name) return i;
  }
  throw ValidationError("unknown HMM symbol \"" + name + "\" in model file");
}

inline nlohmann::ordered_json RowToJson(const HmmCounts::Row &row) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (int o = 0; o < kNumSymbols; ++o) {
    if (row[o] != 0) out[OutcomeName(o)] = row[o];
  }
  return out;
}

inline void RowFromJson(const nlohmann::json &j, HmmCounts::Row *row) {
  if (!j.is_object()) throw ValidationError("malformed count row in model file");
  for (const auto &[name, value] : j.items()) {
    if (!value.is_number_integer()) throw ValidationError("non-integer count in model file");
    (*row)[SymbolFromName(name, false)] = value.get<int64_t>();
  }
}

}  // namespace internal

inline constexpr int kModelFormatVersion = 1;

inline nlohmann::ordered_json ModelToJson(const HmmModel &model) {
  using internal::ContextName;
  const HmmCounts &counts = model.counts();
  nlohmann::ordered_json out;
  out["format"] = "ciextract-hmm";
  out["version"] = kModelFormatVersion;
  nlohmann::ordered_json tagset = nlohmann::ordered_json::array();
  for (CIParam t : kHmmTagset) tagset.push_back(std::string(ParamName(t)));
  out["tagset"] = tagset;
  out["lambda1"] = model.lambda1();
  out["lambda2"] = model.lambda2();
  out["unk_token"] = kUnkToken;
  nlohmann::ordered_json c;
  c["unigram"] = internal::RowToJson(counts.unigram);
  nlohmann::ordered_json bigram = nlohmann::ordered_json::object();
  for (int p = 0; p < kNumSymbols; ++p) {
    nlohmann::ordered_json row = internal::RowToJson(counts.bigram[p]);
    if (!row.empty()) bigram[ContextName(p)] = row;
  }
  c["bigram"] = bigram;
  nlohmann::ordered_json trigram = nlohmann::ordered_json::object();
  for (int p2 = 0; p2 < kNumSymbols; ++p2) {
    nlohmann::ordered_json inner = nlohmann::ordered_json::object();
    for (int p1 = 0; p1 < kNumSymbols; ++p1) {
      nlohmann::ordered_json row = internal::RowToJson(counts.trigram[p2][p1]);
      if (!row.empty()) inner[ContextName(p1)] = row;
    }
    if (!inner.empty()) trigram[ContextName(p2)] = inner;
  }
  c["trigram"] = trigram;
  nlohmann::ordered_json emission = nlohmann::ordered_json::object();
  for (const auto &[word, row] : counts.emission) {
    nlohmann::ordered_json entry = nlohmann::ordered_json::object();
    for (int t = 0; t < kNumTags; ++t) {
      if (row[t] != 0) entry[std::string(ParamName(kHmmTagset[t]))] = row[t];
    }
    emission[word] = entry;
  }
  c["emission"] = emission;
  out["counts"] = c;
  return out;
}

namespace internal {

inline HmmModel ModelFromJsonUnchecked(const nlohmann::json &j) {
  using internal::SymbolFromName;
  if (!j.is_object() || j.value("format", "") != "ciextract-hmm") {
    throw ValidationError("not a ciextract HMM model file");
  }
  if (j.value("version", 0) != kModelFormatVersion) {
    throw ValidationError("unsupported HMM model version");
  }
  std::vector<std::string> tagset = j.at("tagset").get<std::vector<std::string>>();
  if (tagset.size() != kHmmTagset.size()) throw ValidationError("model tagset mismatch");
  for (size_t i = 0; i < tagset.size(); ++i) {
    if (tagset[i] != ParamName(kHmmTagset[i])) throw ValidationError("model tagset mismatch");
  }
  const nlohmann::json &c = j.at("counts");
  HmmCounts counts;
  internal::RowFromJson(c.at("unigram"), &counts.unigram);
  for (const auto &[ctx, row] : c.at("bigram").items()) {
    internal::RowFromJson(row, &counts.bigram[SymbolFromName(ctx, true)]);
  }
  for (const auto &[ctx2, inner] : c.at("trigram").items()) {
    for (const auto &[ctx1, row] : inner.items()) {
      internal::RowFromJson(
          row, &counts.trigram[SymbolFromName(ctx2, true)][SymbolFromName(ctx1, true)]);
    }
  }
  for (const auto &[word, entry] : c.at("emission").items()) {
    std::array<int64_t, kNumTags> row{};
    for (const auto &[tag, value] : entry.items()) {
      int t = SymbolFromName(tag, false);
      if (t == kNumTags) throw ValidationError("boundary symbol cannot emit");
      row[t] = value.get<int64_t>();
    }
    counts.emission.emplace(word, row);
  }
  return HmmModel(std::move(counts), j.at("lambda1").get<double>(),
                  j.at("lambda2").get<double>());
}

}  // namespace internal

inline HmmModel ModelFromJson(const nlohmann::json &j) {
  try {
    return internal::ModelFromJsonUnchecked(j);
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(std::string("malformed model (") + e.what() + ")");
  }
}

inline void SaveModel(const HmmModel &model, const std::filesystem::path &path) {
  std::ofstream out = internal::OpenOutput(path);
  out << ModelToJson(model).dump(1) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

inline HmmModel LoadModel(const std::filesystem::path &path) {
  std::ifstream in = internal::OpenInput(path);
  try {
    return ModelFromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(path.string() + ": malformed model (" + e.what() + ")");
  }
}

}  // namespace ciex

#endif  // CIEXTRACT_HMM_HPP_
