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

// Redundant-verb filter for SRL output.
//
// A tracked predicate whose token lies inside a transmission-principle
// argument of another tracked predicate is redundant: the clause only
// conditions the outer flow. All spans of redundant frames are dropped,
// except those overlapping (one shared token or more) a span of the same
// parameter produced by a surviving frame.

#ifndef CIEXTRACT_REFINER_HPP_
#define CIEXTRACT_REFINER_HPP_

#include <algorithm>
#include <string>
#include <vector>

#include "ciextract/corpus.hpp"
#include "ciextract/interchange.hpp"
#include "ciextract/srl_mapper.hpp"
#include "json.hpp"

namespace ciex {

enum class RedundancyMode {
  // A frame is redundant if any other tracked frame contains it, redundant
  // or not.
  kSinglePass,
  // A frame is redundant only if a surviving frame contains it.
  kFixpoint,
};

struct RedundantVerb {
  int verb_index = 0;
  std::string verb_lemma;
  int container_verb_index = 0;

  bool operator==(const RedundantVerb &) const = default;
};

struct RefinementReport {
  std::string statement_id;
  std::vector<RedundantVerb> redundant_verbs;
  std::vector<Span> dropped_spans;
  std::vector<Span> kept_overlapping_spans;

  bool operator==(const RefinementReport &) const = default;
};

struct Refinement {
  FlowAnnotation annotation;
  RefinementReport report;
  // Tracked frames that are not redundant, in input order.
  std::vector<SrlFrame> surviving_frames;
};

namespace internal {

inline bool InTransmissionPrinciple(const SrlFrame &outer, int token,
                                    const VerbLexicon &lexicon) {
  for (const SrlArgument &arg : outer.arguments) {
    if (lexicon.tp_roles.count(arg.role) && arg.start <= token && token < arg.end) {
      return true;
    }
  }
  return false;
}

// containers[f] lists the frames whose TP holds frame f's predicate. When
// two frames hold each other, only the one with the earlier verb counts as
// the container.
inline std::vector<std::vector<size_t>> Containers(const std::vector<SrlFrame> &frames,
                                                   const std::vector<bool> &tracked,
                                                   const VerbLexicon &lexicon) {
  const size_t n = frames.size();
  std::vector<std::vector<size_t>> containers(n);
  for (size_t f = 0; f < n; ++f) {
    if (!tracked[f]) continue;
    for (size_t g = 0; g < n; ++g) {
      if (g == f || !tracked[g]) continue;
      if (!InTransmissionPrinciple(frames[g], frames[f].verb_index, lexicon)) continue;
      bool mutual = InTransmissionPrinciple(frames[f], frames[g].verb_index, lexicon);
      if (mutual && frames[f].verb_index < frames[g].verb_index) continue;
      containers[f].push_back(g);
    }
  }
  return containers;
}

}  // namespace internal

// Indices (into frames) of redundant tracked frames, ascending. Untracked
// frames are never redundant and never contain others.
inline std::vector<size_t> FindRedundantFrames(const std::vector<SrlFrame> &frames,
                                               const VerbLexicon &lexicon,
                                               RedundancyMode mode = RedundancyMode::kSinglePass,
                                               std::vector<size_t> *container_of = nullptr) {
  const size_t n = frames.size();
  std::vector<bool> tracked(n);
  for (size_t f = 0; f < n; ++f) {
    tracked[f] = ClassifyVerb(frames[f].verb_lemma, lexicon) != VerbClass::kUntracked;
  }
  std::vector<std::vector<size_t>> containers = internal::Containers(frames, tracked, lexicon);
  auto earliest = [&](const std::vector<size_t> &candidates) {
    return *std::min_element(candidates.begin(), candidates.end(), [&](size_t a, size_t b) {
      return std::pair(frames[a].verb_index, a) < std::pair(frames[b].verb_index, b);
    });
  };
  std::vector<size_t> redundant;
  std::vector<size_t> container(n, n);
  if (mode == RedundancyMode::kSinglePass) {
    for (size_t f = 0; f < n; ++f) {
      if (!containers[f].empty()) {
        redundant.push_back(f);
        container[f] = earliest(containers[f]);
      }
    }
  } else {
    enum class State { kUnknown, kKept, kRedundant };
    std::vector<State> state(n, State::kUnknown);
    size_t undecided = 0;
    for (size_t f = 0; f < n; ++f) {
      if (tracked[f]) {
        ++undecided;
      } else {
        state[f] = State::kRedundant;  // placeholder: never reported
      }
    }
    while (undecided > 0) {
      bool progress = false;
      for (size_t f = 0; f < n; ++f) {
        if (state[f] != State::kUnknown) continue;
        std::vector<size_t> kept_containers;
        bool all_decided = true;
        for (size_t g : containers[f]) {
          if (state[g] == State::kKept) kept_containers.push_back(g);
          if (state[g] == State::kUnknown) all_decided = false;
        }
        if (!kept_containers.empty()) {
          state[f] = State::kRedundant;
          container[f] = earliest(kept_containers);
        } else if (all_decided) {
          state[f] = State::kKept;
        } else {
          continue;
        }
        --undecided;
        progress = true;
      }
      if (progress) continue;
      // Containment cycle: the earliest undecided verb survives and its
      // undecided containers are discarded.
      size_t pick = n;
      for (size_t f = 0; f < n; ++f) {
        if (state[f] == State::kUnknown &&
            (pick == n || frames[f].verb_index < frames[pick].verb_index)) {
          pick = f;
        }
      }
      state[pick] = State::kKept;
      --undecided;
      for (size_t g : containers[pick]) {
        if (state[g] == State::kUnknown) {
          state[g] = State::kRedundant;
          container[g] = pick;
          --undecided;
        }
      }
    }
    for (size_t f = 0; f < n; ++f) {
      if (tracked[f] && state[f] == State::kRedundant) redundant.push_back(f);
    }
  }
  if (container_of != nullptr) *container_of = std::move(container);
  return redundant;
}

inline Refinement Refine(const std::string &statement_id, const std::vector<SrlFrame> &frames,
                         const VerbLexicon &lexicon,
                         RedundancyMode mode = RedundancyMode::kSinglePass) {
  CheckSingleStatement(statement_id, frames);
  std::vector<size_t> container;
  std::vector<size_t> redundant = FindRedundantFrames(frames, lexicon, mode, &container);
  std::vector<bool> is_redundant(frames.size(), false);
  for (size_t f : redundant) is_redundant[f] = true;

  Refinement result;
  result.report.statement_id = statement_id;
  FlowAnnotation &annotation = result.annotation;
  annotation.statement_id = statement_id;
  annotation.method = "ci-srl";
  bool tracked = false;
  for (size_t f = 0; f < frames.size(); ++f) {
    if (ClassifyVerb(frames[f].verb_lemma, lexicon) == VerbClass::kUntracked) continue;
    tracked = true;
    if (is_redundant[f]) continue;
    result.surviving_frames.push_back(frames[f]);
    FlowAnnotation part = MapFrame(frames[f], lexicon);
    annotation.spans.insert(annotation.spans.end(), part.spans.begin(), part.spans.end());
  }
  const std::vector<Span> survivors = annotation.spans;
  for (size_t f : redundant) {
    result.report.redundant_verbs.push_back(RedundantVerb{
        frames[f].verb_index, frames[f].verb_lemma, frames[container[f]].verb_index});
    for (const Span &span : MapFrame(frames[f], lexicon).spans) {
      bool overlaps = std::any_of(survivors.begin(), survivors.end(), [&](const Span &s) {
        return s.param == span.param && SharedTokens(s, span) > 0;
      });
      if (overlaps) {
        result.report.kept_overlapping_spans.push_back(span);
        annotation.spans.push_back(span);
      } else {
        result.report.dropped_spans.push_back(span);
      }
    }
  }
  CanonicalizeSpans(&annotation.spans);
  annotation.unprocessed = !tracked;
  if (tracked) annotation.subject_assumption = kAssumedSubject;
  return result;
}

inline nlohmann::ordered_json ReportToJson(const RefinementReport &report) {
  nlohmann::ordered_json out;
  out["statement_id"] = report.statement_id;
  nlohmann::ordered_json verbs = nlohmann::ordered_json::array();
  for (const RedundantVerb &v : report.redundant_verbs) {
    nlohmann::ordered_json verb;
    verb["verb_index"] = v.verb_index;
    verb["verb_lemma"] = v.verb_lemma;
    verb["container_verb_index"] = v.container_verb_index;
    verbs.push_back(verb);
  }
  out["redundant_verbs"] = verbs;
  nlohmann::ordered_json dropped = nlohmann::ordered_json::array();
  for (const Span &s : report.dropped_spans) dropped.push_back(SpanToJson(s));
  out["dropped_spans"] = dropped;
  nlohmann::ordered_json kept = nlohmann::ordered_json::array();
  for (const Span &s : report.kept_overlapping_spans) kept.push_back(SpanToJson(s));
  out["kept_overlapping_spans"] = kept;
  return out;
}

inline void WriteRefinementReports(const std::vector<RefinementReport> &reports,
                                   const std::filesystem::path &path) {
  std::ofstream out = internal::OpenOutput(path);
  for (const RefinementReport &r : reports) out << ReportToJson(r).dump() << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace ciex

#endif  // CIEXTRACT_REFINER_HPP_
