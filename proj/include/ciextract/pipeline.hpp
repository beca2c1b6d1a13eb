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

// Pipeline configuration and run manifests.

#ifndef CIEXTRACT_PIPELINE_HPP_
#define CIEXTRACT_PIPELINE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ciextract/corpus.hpp"
#include "ciextract/evaluator.hpp"
#include "ciextract/hmm.hpp"
#include "json.hpp"

namespace ciex {

inline constexpr const char *kToolName = "ci-extract";
inline constexpr const char *kToolVersion = "1.0.0";
inline constexpr const char *kConfigEnvVar = "CI_EXTRACTOR_CONFIG";

struct PipelineConfig {
  std::vector<std::string> allowed_labels = IngestOptions{}.allowed_labels;
  bool split_on_colon = false;
  double lambda1 = kDefaultLambda1;
  double lambda2 = kDefaultLambda2;
  double grid_step = 0.1;
  std::string dp_rules;
  std::string verb_lexicon;
  MatchPolicy match;
  bool valid_only = true;
  bool fixpoint = false;
  uint64_t seed = 0;
  std::vector<double> histogram_edges = DefaultHistogramEdges();

  // Referenced rule files must exist when a run starts.
  void Validate() const {
    HmmModel::CheckLambdas(lambda1, lambda2);
    match.Validate();
    for (const std::string *path : {&dp_rules, &verb_lexicon}) {
      if (!path->empty() && !std::filesystem::exists(*path)) {
        throw IoError("configured file does not exist: " + *path);
      }
    }
  }
};

inline nlohmann::ordered_json ConfigToJson(const PipelineConfig &c) {
  nlohmann::ordered_json out;
  out["allowed_labels"] = c.allowed_labels;
  out["split_on_colon"] = c.split_on_colon;
  out["lambda1"] = c.lambda1;
  out["lambda2"] = c.lambda2;
  out["grid_step"] = c.grid_step;
  out["dp_rules"] = c.dp_rules;
  out["verb_lexicon"] = c.verb_lexicon;
  out["match"] = c.match.criterion == MatchCriterion::kExact ? "exact" : "overlap";
  out["overlap_threshold"] = c.match.overlap_threshold;
  out["valid_only"] = c.valid_only;
  out["fixpoint"] = c.fixpoint;
  out["seed"] = c.seed;
  out["histogram_edges"] = c.histogram_edges;
  return out;
}

inline MatchCriterion ParseCriterion(const std::string &name) {
  if (name == "overlap") return MatchCriterion::kOverlap;
  if (name == "exact") return MatchCriterion::kExact;
  throw ValidationError("unknown match criterion \"" + name + "\"");
}

// Reads a JSON config; absent keys keep their defaults.
inline PipelineConfig LoadPipelineConfig(const std::filesystem::path &path) {
  std::ifstream in = internal::OpenInput(path);
  PipelineConfig c;
  try {
    nlohmann::json j = nlohmann::json::parse(in);
    if (!j.is_object()) throw ValidationError(path.string() + ": config must be an object");
    c.allowed_labels = j.value("allowed_labels", c.allowed_labels);
    c.split_on_colon = j.value("split_on_colon", c.split_on_colon);
    c.lambda1 = j.value("lambda1", c.lambda1);
    c.lambda2 = j.value("lambda2", c.lambda2);
    c.grid_step = j.value("grid_step", c.grid_step);
    c.dp_rules = j.value("dp_rules", c.dp_rules);
    c.verb_lexicon = j.value("verb_lexicon", c.verb_lexicon);
    c.match.criterion = ParseCriterion(j.value("match", std::string("overlap")));
    c.match.overlap_threshold = j.value("overlap_threshold", c.match.overlap_threshold);
    c.valid_only = j.value("valid_only", c.valid_only);
    c.fixpoint = j.value("fixpoint", c.fixpoint);
    c.seed = j.value("seed", c.seed);
    c.histogram_edges = j.value("histogram_edges", c.histogram_edges);
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(path.string() + ": malformed config (" + e.what() + ")");
  }
  return c;
}

// 64-bit FNV-1a.
inline uint64_t Fnv1a64(std::string_view data) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

inline std::string HexDigest(uint64_t value) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << value;
  return os.str();
}

inline std::string HashFile(const std::filesystem::path &path) {
  std::ifstream in = internal::OpenInput(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return HexDigest(Fnv1a64(buffer.str()));
}

inline std::string ConfigHash(const PipelineConfig &c) {
  return HexDigest(Fnv1a64(ConfigToJson(c).dump()));
}

struct RunManifest {
  std::string subcommand;
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
};

// Inputs are recorded with content hashes; no timestamps, so identical runs
// produce identical manifests.
inline void WriteManifest(const RunManifest &run, const PipelineConfig &config,
                          const std::filesystem::path &path) {
  nlohmann::ordered_json out;
  out["tool"] = kToolName;
  out["version"] = kToolVersion;
  out["subcommand"] = run.subcommand;
  out["config_hash"] = ConfigHash(config);
  out["config"] = ConfigToJson(config);
  nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
  for (const auto &p : run.inputs) {
    nlohmann::ordered_json entry;
    entry["path"] = p.string();
    if (std::filesystem::is_regular_file(p)) {
      entry["fnv1a64"] = HashFile(p);
    } else if (std::filesystem::is_directory(p)) {
      std::vector<std::filesystem::path> files;
      for (const auto &e : std::filesystem::directory_iterator(p)) {
        if (e.is_regular_file()) files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      std::string combined;
      for (const auto &f : files) combined += f.filename().string() + ":" + HashFile(f) + "\n";
      entry["fnv1a64"] = HexDigest(Fnv1a64(combined));
    }
    inputs.push_back(entry);
  }
  out["inputs"] = inputs;
  nlohmann::ordered_json outputs = nlohmann::ordered_json::array();
  for (const auto &p : run.outputs) outputs.push_back(p.string());
  out["outputs"] = outputs;
  std::ofstream file = internal::OpenOutput(path);
  file << out.dump(2) << '\n';
  if (!file) throw IoError("write failed: " + path.string());
}

// Deterministic train/validation split: Fisher-Yates over indices driven by
// mt19937_64, whose output sequence is fixed by the standard.
template <typename T>
std::pair<std::vector<T>, std::vector<T>> SeededSplit(const std::vector<T> &items,
                                                      double validation_fraction,
                                                      uint64_t seed) {
  std::vector<size_t> order(items.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (size_t i = order.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  size_t validation_size =
      static_cast<size_t>(std::llround(validation_fraction * static_cast<double>(items.size())));
  std::vector<T> train;
  std::vector<T> validation;
  for (size_t k = 0; k < order.size(); ++k) {
    (k < validation_size ? validation : train).push_back(items[order[k]]);
  }
  return {std::move(train), std::move(validation)};
}

}  // namespace ciex

#endif  // CIEXTRACT_PIPELINE_HPP_
