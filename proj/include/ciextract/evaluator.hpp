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

// Scoring.
//
// Two counting modes are supported:
//
//   word level    token tags pooled over the whole test set (tag sequences)
//   phrase macro  spans matched per statement, precision and recall
//                 averaged over statements (annotations)
//
// Phrase matching is greedy and one-to-one. Predictions are visited by start
// (longer spans first on equal starts) and each takes the unmatched gold span
// of its parameter with the largest token overlap that satisfies the match
// policy.

#ifndef CIEXTRACT_EVALUATOR_HPP_
#define CIEXTRACT_EVALUATOR_HPP_

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "ciextract/base.hpp"
#include "ciextract/corpus.hpp"
#include "ciextract/interchange.hpp"

namespace ciex {

enum class MatchCriterion { kOverlap, kExact };

struct MatchPolicy {
  MatchCriterion criterion = MatchCriterion::kOverlap;
  // Minimum fraction of the gold span that must be shared. Zero means any
  // shared token.
  double overlap_threshold = 0.0;

  void Validate() const {
    if (!(overlap_threshold >= 0.0 && overlap_threshold <= 1.0)) {
      throw ValidationError("overlap threshold must lie in [0, 1]");
    }
  }

  bool Accepts(const Span &pred, const Span &gold) const {
    if (criterion == MatchCriterion::kExact) {
      return pred.start == gold.start && pred.end == gold.end;
    }
    int shared = SharedTokens(pred, gold);
    return shared > 0 &&
           static_cast<double>(shared) / gold.length() >= overlap_threshold - 1e-12;
  }
};

enum class ScoreMode { kWordLevel, kPhraseMacro };

inline std::string_view ScoreModeName(ScoreMode mode) {
  return mode == ScoreMode::kWordLevel ? "word-level" : "phrase-macro";
}

struct MatchCounts {
  int tp = 0;
  int fp = 0;
  int fn = 0;

  bool operator==(const MatchCounts &) const = default;
};

struct SpanOutcome {
  Span span;
  bool matched = false;
};

struct StatementScore {
  std::string statement_id;
  std::string policy_id;
  std::map<CIParam, MatchCounts> counts;
  // Every predicted span with its match result, Actor spans included. Actor
  // predictions are matched against gold senders and receivers but never
  // enter the per-parameter counts.
  std::vector<SpanOutcome> outcomes;
};

struct ParamScore {
  CIParam param = CIParam::kAttribute;
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  ScoreMode mode = ScoreMode::kPhraseMacro;
  // Pooled counts; for phrase-macro these are summed over statements.
  MatchCounts support;
  // Number of statements averaged for precision and for recall.
  size_t precision_statements = 0;
  size_t recall_statements = 0;
};

inline double F1(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

namespace internal {

inline bool PredictionOrder(const Span &a, const Span &b) {
  return std::tuple(a.start, -a.end, a.param, a.source_tag) <
         std::tuple(b.start, -b.end, b.param, b.source_tag);
}

}  // namespace internal

inline StatementScore ScoreStatement(const FlowAnnotation &pred, const FlowAnnotation &gold,
                                     const MatchPolicy &policy = {}) {
  if (pred.statement_id != gold.statement_id) {
    throw ValidationError("scoring mismatched statements: " + pred.statement_id + " vs " +
                          gold.statement_id);
  }
  StatementScore score;
  score.statement_id = gold.statement_id;
  std::vector<Span> gold_spans;
  for (const Span &s : gold.spans) {
    if (s.param != CIParam::kActor && s.param != CIParam::kO) gold_spans.push_back(s);
  }
  std::sort(gold_spans.begin(), gold_spans.end(), SpanLess);
  std::vector<Span> predictions = pred.spans;
  std::sort(predictions.begin(), predictions.end(), internal::PredictionOrder);

  std::vector<bool> used(gold_spans.size(), false);
  std::vector<bool> used_by_actor(gold_spans.size(), false);
  for (const Span &p : predictions) {
    bool actor = p.param == CIParam::kActor;
    std::vector<bool> &taken = actor ? used_by_actor : used;
    int best = -1;
    int best_shared = -1;
    for (size_t g = 0; g < gold_spans.size(); ++g) {
      const Span &candidate = gold_spans[g];
      bool param_ok = actor ? (candidate.param == CIParam::kSender ||
                               candidate.param == CIParam::kReceiver)
                            : candidate.param == p.param;
      if (!param_ok || taken[g] || !policy.Accepts(p, candidate)) continue;
      int shared = SharedTokens(p, candidate);
      if (shared > best_shared) {
        best_shared = shared;
        best = static_cast<int>(g);
      }
    }
    if (best >= 0) taken[best] = true;
    score.outcomes.push_back(SpanOutcome{p, best >= 0});
    if (actor) continue;
    MatchCounts &c = score.counts[p.param];
    if (best >= 0) {
      ++c.tp;
    } else {
      ++c.fp;
    }
  }
  for (size_t g = 0; g < gold_spans.size(); ++g) {
    if (!used[g]) ++score.counts[gold_spans[g].param].fn;
  }
  for (CIParam p : kScoredParams) score.counts.try_emplace(p);
  return score;
}

// Per-statement precision and recall, averaged over statements. A ratio
// whose denominator is zero (no predictions, or no gold spans, for that
// parameter) is left out of its average rather than counted as 0 or 1, so
// statements with neither are skipped entirely. F1 is computed from the
// averaged precision and recall.
inline std::vector<ParamScore> MacroAverage(const std::vector<StatementScore> &scores) {
  std::vector<ParamScore> out;
  for (CIParam param : kScoredParams) {
    ParamScore ps;
    ps.param = param;
    ps.mode = ScoreMode::kPhraseMacro;
    double precision_sum = 0.0;
    double recall_sum = 0.0;
    for (const StatementScore &s : scores) {
      auto it = s.counts.find(param);
      if (it == s.counts.end()) continue;
      const MatchCounts &c = it->second;
      ps.support.tp += c.tp;
      ps.support.fp += c.fp;
      ps.support.fn += c.fn;
      if (c.tp + c.fp > 0) {
        precision_sum += static_cast<double>(c.tp) / (c.tp + c.fp);
        ++ps.precision_statements;
      }
      if (c.tp + c.fn > 0) {
        recall_sum += static_cast<double>(c.tp) / (c.tp + c.fn);
        ++ps.recall_statements;
      }
    }
    if (ps.precision_statements == 0 && ps.recall_statements == 0) continue;
    if (ps.precision_statements > 0) ps.precision = precision_sum / ps.precision_statements;
    if (ps.recall_statements > 0) ps.recall = recall_sum / ps.recall_statements;
    ps.f1 = F1(ps.precision, ps.recall);
    out.push_back(ps);
  }
  return out;
}

// Token tags pooled over the whole set; O is not a scored class.
inline std::vector<ParamScore> WordLevelScores(const std::vector<TaggedSentence> &pred,
                                               const std::vector<TaggedSentence> &gold) {
  if (pred.size() != gold.size()) {
    throw ValidationError("prediction and gold sets differ in sentence count (" +
                          std::to_string(pred.size()) + " vs " + std::to_string(gold.size()) +
                          ")");
  }
  std::map<CIParam, MatchCounts> counts;
  std::set<CIParam> seen;
  for (size_t i = 0; i < gold.size(); ++i) {
    const TaggedSentence &p = pred[i];
    const TaggedSentence &g = gold[i];
    if (p.statement_id != g.statement_id) {
      throw ValidationError("misaligned sentences: " + p.statement_id + " vs " +
                            g.statement_id);
    }
    if (p.tags.size() != g.tags.size()) {
      throw ValidationError(g.statement_id + ": prediction has " +
                            std::to_string(p.tags.size()) + " tags, gold has " +
                            std::to_string(g.tags.size()));
    }
    for (size_t k = 0; k < g.tags.size(); ++k) {
      CIParam pt = p.tags[k];
      CIParam gt = g.tags[k];
      if (pt != CIParam::kO) seen.insert(pt);
      if (gt != CIParam::kO) seen.insert(gt);
      if (pt == gt) {
        if (pt != CIParam::kO) ++counts[pt].tp;
        continue;
      }
      if (pt != CIParam::kO) ++counts[pt].fp;
      if (gt != CIParam::kO) ++counts[gt].fn;
    }
  }
  std::vector<ParamScore> out;
  for (CIParam param : kScoredParams) {
    if (!seen.count(param)) continue;
    const MatchCounts &c = counts[param];
    ParamScore ps;
    ps.param = param;
    ps.mode = ScoreMode::kWordLevel;
    ps.support = c;
    ps.precision = c.tp + c.fp > 0 ? static_cast<double>(c.tp) / (c.tp + c.fp) : 0.0;
    ps.recall = c.tp + c.fn > 0 ? static_cast<double>(c.tp) / (c.tp + c.fn) : 0.0;
    ps.f1 = F1(ps.precision, ps.recall);
    out.push_back(ps);
  }
  return out;
}

struct TagDistributionRow {
  std::string source_tag;
  size_t total = 0;
  size_t matched = 0;
  double tp_pct = 0.0;
  double fp_pct = 0.0;
};

// Share of each source tag's predicted spans that matched gold.
inline std::vector<TagDistributionRow> TagDistribution(const std::vector<StatementScore> &scores) {
  std::map<std::string, TagDistributionRow> rows;
  for (const StatementScore &s : scores) {
    for (const SpanOutcome &o : s.outcomes) {
      TagDistributionRow &row = rows[o.span.source_tag];
      row.source_tag = o.span.source_tag;
      ++row.total;
      row.matched += o.matched;
    }
  }
  std::vector<TagDistributionRow> out;
  for (auto &[tag, row] : rows) {
    row.tp_pct = 100.0 * row.matched / row.total;
    row.fp_pct = 100.0 - row.tp_pct;
    out.push_back(row);
  }
  return out;
}

struct PolicyHistogram {
  // Bin i covers [edges[i], edges[i + 1]); the last bin is open-ended.
  std::vector<double> edges;
  std::vector<size_t> counts;
  size_t below = 0;
  // Per-policy F1 in percent.
  std::map<std::string, double> policy_f1;

  std::string Label(size_t bin) const {
    auto fmt = [](double v) {
      std::ostringstream os;
      os << v;
      return os.str();
    };
    if (bin + 1 < edges.size()) {
      return "[" + fmt(edges[bin]) + "," + fmt(edges[bin + 1]) + ")";
    }
    return ">=" + fmt(edges[bin]);
  }
};

inline std::vector<double> DefaultHistogramEdges() { return {70.0, 80.0, 90.0}; }

// Parameters with at least one scored prediction anywhere in the corpus.
inline std::set<CIParam> PredictedParams(const std::vector<StatementScore> &scores) {
  std::set<CIParam> out;
  for (const StatementScore &s : scores) {
    for (const auto &[param, c] : s.counts) {
      if (c.tp + c.fp > 0) out.insert(param);
    }
  }
  return out;
}

// Drops rows for parameters the method never predicts.
inline std::vector<ParamScore> PredictedOnly(std::vector<ParamScore> scores) {
  std::erase_if(scores, [](const ParamScore &s) { return s.support.tp + s.support.fp == 0; });
  return scores;
}

// Macro F1 per policy, binned. The mean runs over the parameters scored for
// the policy, restricted to those the method predicts somewhere in the corpus.
inline PolicyHistogram PerPolicyF1(const std::vector<StatementScore> &scores,
                                   std::vector<double> edges = DefaultHistogramEdges()) {
  if (edges.empty() || !std::is_sorted(edges.begin(), edges.end())) {
    throw ValidationError("histogram edges must be non-empty and ascending");
  }
  std::map<std::string, std::vector<StatementScore>> by_policy;
  for (const StatementScore &s : scores) {
    if (s.policy_id.empty()) {
      throw ValidationError(s.statement_id + ": statement has no policy id");
    }
    by_policy[s.policy_id].push_back(s);
  }
  std::set<CIParam> predicted = PredictedParams(scores);
  PolicyHistogram hist;
  hist.edges = std::move(edges);
  hist.counts.assign(hist.edges.size(), 0);
  for (const auto &[policy, group] : by_policy) {
    double sum = 0.0;
    size_t used = 0;
    for (const ParamScore &p : MacroAverage(group)) {
      if (!predicted.count(p.param)) continue;
      sum += p.f1;
      ++used;
    }
    if (used == 0) continue;
    double f1 = 100.0 * sum / used;
    hist.policy_f1[policy] = f1;
    if (f1 + 1e-9 < hist.edges.front()) {
      ++hist.below;
      continue;
    }
    size_t bin = hist.edges.size() - 1;
    while (f1 + 1e-9 < hist.edges[bin]) --bin;
    ++hist.counts[bin];
  }
  return hist;
}

// Pairs predictions with gold by statement id and scores every gold
// statement. Missing predictions count as empty annotations.
inline std::vector<StatementScore> ScoreCorpus(const std::vector<FlowAnnotation> &pred,
                                               const std::vector<FlowAnnotation> &gold,
                                               const std::map<std::string, std::string> &policy_of,
                                               const MatchPolicy &policy, bool valid_only) {
  std::map<std::string, const FlowAnnotation *> by_id;
  for (const FlowAnnotation &p : pred) {
    if (!by_id.emplace(p.statement_id, &p).second) {
      throw ValidationError("duplicate prediction for statement " + p.statement_id);
    }
  }
  std::vector<StatementScore> scores;
  for (const FlowAnnotation &g : gold) {
    if (valid_only && g.valid.has_value() && !*g.valid) continue;
    FlowAnnotation empty;
    empty.statement_id = g.statement_id;
    auto it = by_id.find(g.statement_id);
    StatementScore s = ScoreStatement(it == by_id.end() ? empty : *it->second, g, policy);
    auto pol = policy_of.find(g.statement_id);
    if (pol != policy_of.end()) s.policy_id = pol->second;
    scores.push_back(std::move(s));
  }
  return scores;
}

}  // namespace ciex

#endif  // CIEXTRACT_EVALUATOR_HPP_
