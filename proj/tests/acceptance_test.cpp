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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>

#include "test_support.hpp"

#ifndef CIEX_CLI_PATH
#error "CIEX_CLI_PATH must name the ci-extract binary"
#endif

namespace ciex {
namespace {

using testing::FixturePath;

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome ViterbiMatchesExhaustiveSearch() {
  auto begin = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20260101);
  const std::vector<std::string> vocab = {"we", "collect", "data", kUnkToken};
  int agree = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    HmmModel model = testing::RandomModel(rng, vocab);
    int n = 1 + static_cast<int>(rng() % 6);
    std::vector<std::string> tokens;
    for (int i = 0; i < n; ++i) tokens.push_back(vocab[rng() % vocab.size()]);
    agree += ViterbiDecode(model, tokens) == testing::BruteForceDecode(model, tokens);
  }
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d/%d agree, %.2f s", agree, trials, seconds);
  return {agree == trials && seconds < 10.0, buf};
}

Outcome TransitionsNormalize() {
  HmmModel model = TrainHmm(testing::FixtureTagged());
  int contexts = 0;
  double worst = 0.0;
  for (int a = 0; a < kNumSymbols; ++a) {
    for (int b = 0; b < kNumSymbols; ++b) {
      HmmSymbol p2 = HmmSymbol::FromIndex(a);
      HmmSymbol p1 = HmmSymbol::FromIndex(b);
      if (!model.TrigramContextSeen(p2, p1)) continue;
      ++contexts;
      double sum = 0.0;
      for (int o = 0; o < kNumSymbols; ++o) sum += model.Transition(p2, p1, HmmSymbol::FromIndex(o));
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d contexts, max deviation %.2e", contexts, worst);
  return {contexts > 0 && worst <= 1e-9, buf};
}

const Statement &StatementById(const std::vector<Statement> &statements, const std::string &id) {
  for (const Statement &s : statements) {
    if (s.id == id) return s;
  }
  throw std::runtime_error("fixture statement not found: " + id);
}

bool HasText(const FlowAnnotation &a, const std::vector<Token> &tokens, CIParam param,
             const std::string &text) {
  for (const Span &s : a.spans) {
    if (s.param == param && testing::SpanText(tokens, s.start, s.end) == text) return true;
  }
  return false;
}

Outcome WorkedExamples() {
  std::vector<std::string> failed;
  std::vector<Statement> statements = IngestCorpus(FixturePath("corpus")).statements;
  std::vector<SrlFrame> frames = ReadSrlFrames(FixturePath("frames.jsonl"));

  DepTree tree = testing::FindById(ReadConllu(FixturePath("parses.conllu")), "p1/s1/0");
  FlowAnnotation dp = MapDependencies(tree, DepMappingRules{});
  if (!(HasText(dp, tree.tokens, CIParam::kTP, "When you use Google services") &&
        HasText(dp, tree.tokens, CIParam::kAttribute, "information about your actual location") &&
        HasText(dp, tree.tokens, CIParam::kSubject, "your") &&
        HasText(dp, tree.tokens, CIParam::kActor, "we"))) {
    failed.push_back("a");
  }

  const Statement &s2 = StatementById(statements, "p2/s1/0");
  FlowAnnotation srl =
      ExtractStatement("p2/s1/0", testing::FramesFor(frames, "p2/s1/0"), VerbLexicon{});
  if (!(HasText(srl, s2.tokens, CIParam::kReceiver, "We") &&
        HasText(srl, s2.tokens, CIParam::kAttribute, "technical information") &&
        HasText(srl, s2.tokens, CIParam::kTP, "when you visit our websites") &&
        HasText(srl, s2.tokens, CIParam::kTP, "or use our mobile applications or services"))) {
    failed.push_back("b");
  }

  const Statement &s3 = StatementById(statements, "p3/s1/0");
  Refinement refined =
      Refine("p3/s1/0", testing::FramesFor(frames, "p3/s1/0"), VerbLexicon{});
  bool share_redundant = refined.report.redundant_verbs.size() == 1 &&
                         s3.tokens[refined.report.redundant_verbs[0].verb_index].text == "sharing";
  bool dropped = refined.report.dropped_spans.size() == 2 &&
                 !HasText(refined.annotation, s3.tokens, CIParam::kSender, "you") &&
                 !HasText(refined.annotation, s3.tokens, CIParam::kAttribute, "your post");
  if (!(share_redundant && dropped)) failed.push_back("c");

  std::string detail = failed.empty() ? "(a) (b) (c) reproduced" : "failed:";
  for (const std::string &f : failed) detail += " (" + f + ")";
  return {failed.empty(), detail};
}

Outcome FilterImprovesPrecision() {
  std::vector<Statement> statements = IngestCorpus(FixturePath("corpus")).statements;
  std::vector<SrlFrame> frames = ReadSrlFrames(FixturePath("frames.jsonl"));
  std::vector<FlowAnnotation> gold = ReadAnnotations(FixturePath("gold.jsonl"));
  std::map<std::string, std::string> policy_of;
  std::vector<FlowAnnotation> srl;
  std::vector<FlowAnnotation> ci_srl;
  for (const Statement &s : statements) {
    policy_of[s.id] = s.policy_id;
    std::vector<SrlFrame> group = testing::FramesFor(frames, s.id);
    srl.push_back(ExtractStatement(s.id, group, VerbLexicon{}));
    ci_srl.push_back(Refine(s.id, group, VerbLexicon{}).annotation);
  }
  auto table = [&](const std::vector<FlowAnnotation> &pred) {
    return PredictedOnly(MacroAverage(ScoreCorpus(pred, gold, policy_of, MatchPolicy{}, true)));
  };
  std::vector<ParamScore> base = table(srl);
  std::vector<ParamScore> refined = table(ci_srl);
  bool pass = !base.empty();
  std::string detail;
  for (const ParamScore &b : base) {
    auto it = std::find_if(refined.begin(), refined.end(),
                           [&](const ParamScore &r) { return r.param == b.param; });
    bool ok = it != refined.end() && it->precision >= b.precision - 1e-12 &&
              it->recall >= b.recall - 0.05 - 1e-12;
    pass = pass && ok;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s P %.4f->%.4f R %.4f->%.4f; ",
                  std::string(ParamName(b.param)).c_str(), b.precision,
                  it == refined.end() ? 0.0 : it->precision, b.recall,
                  it == refined.end() ? 0.0 : it->recall);
    detail += buf;
  }
  return {pass, detail};
}

std::vector<std::vector<std::string>> CsvSection(const std::string &text, int index) {
  std::istringstream in(text);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  int section = 0;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) {
      ++section;
      header = true;
      continue;
    }
    if (header) {
      header = false;
      continue;
    }
    if (section != index) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

Outcome MetricsMatchSpreadsheet() {
  std::string sheet = testing::ReadFile(FixturePath("metrics/spreadsheet.csv"));
  std::vector<FlowAnnotation> gold = ReadAnnotations(FixturePath("metrics/gold.jsonl"));
  std::vector<FlowAnnotation> pred = ReadAnnotations(FixturePath("metrics/pred.jsonl"));
  std::map<std::string, std::string> policy_of;
  for (const FlowAnnotation &g : gold) {
    policy_of[g.statement_id] = g.statement_id.substr(0, g.statement_id.find('/'));
  }
  auto near = [](double value, const std::string &expected) {
    return std::abs(value - std::stod(expected)) < 5e-5;
  };
  int checked = 0;
  int mismatched = 0;
  for (const auto &cells : CsvSection(sheet, 1)) {
    MatchPolicy policy;
    policy.criterion = cells[0] == "exact" ? MatchCriterion::kExact : MatchCriterion::kOverlap;
    std::vector<ParamScore> rows =
        MacroAverage(ScoreCorpus(pred, gold, policy_of, policy, true));
    CIParam param = ParseParam(cells[1]).value();
    auto it = std::find_if(rows.begin(), rows.end(),
                           [&](const ParamScore &r) { return r.param == param; });
    ++checked;
    if (it == rows.end() || !near(it->precision, cells[2]) || !near(it->recall, cells[3]) ||
        !near(it->f1, cells[4])) {
      ++mismatched;
    }
  }
  std::vector<ParamScore> word = WordLevelScores(ReadConll2003(FixturePath("metrics/pred.conll")),
                                                 ReadConll2003(FixturePath("metrics/gold.conll")));
  for (const auto &cells : CsvSection(sheet, 3)) {
    CIParam param = ParseParam(cells[1]).value();
    auto it = std::find_if(word.begin(), word.end(),
                           [&](const ParamScore &r) { return r.param == param; });
    ++checked;
    if (it == word.end() || !near(it->precision, cells[5]) || !near(it->recall, cells[6]) ||
        !near(it->f1, cells[7])) {
      ++mismatched;
    }
  }
  return {checked == 15 && mismatched == 0,
          std::to_string(checked - mismatched) + "/" + std::to_string(checked) +
              " rows within 5e-5 (phrase-macro overlap and exact, word-level)"};
}

Outcome RefineContainmentAndIdempotence() {
  std::mt19937_64 rng(5150);
  VerbLexicon lexicon;
  int violations = 0;
  const int trials = 500;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<SrlFrame> frames = testing::RandomFrames(rng, "r");
    Refinement once = Refine("r", frames, lexicon);
    std::set<testing::SpanKey> refined = testing::SpanKeys(once.annotation.spans);
    std::set<testing::SpanKey> plain =
        testing::SpanKeys(ExtractStatement("r", frames, lexicon).spans);
    bool subset = std::includes(plain.begin(), plain.end(), refined.begin(), refined.end());
    Refinement twice = Refine("r", once.surviving_frames, lexicon);
    bool idempotent =
        twice.report.redundant_verbs.empty() &&
        twice.surviving_frames.size() == once.surviving_frames.size() &&
        twice.annotation.spans == ExtractStatement("r", once.surviving_frames, lexicon).spans;
    violations += !(subset && idempotent);
  }
  return {violations == 0,
          std::to_string(trials - violations) + "/" + std::to_string(trials) + " frame sets"};
}

int RunIn(const std::filesystem::path &dir, const std::string &args) {
  std::string command =
      "cd \"" + dir.string() + "\" && \"" + CIEX_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> Snapshot(const std::filesystem::path &dir) {
  std::map<std::string, std::string> files;
  for (const auto &entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) {
      files[std::filesystem::relative(entry.path(), dir).string()] =
          testing::ReadFile(entry.path());
    }
  }
  return files;
}

Outcome PipelineIsDeterministic() {
  auto fixture = [](const std::string &name) { return "\"" + FixturePath(name).string() + "\""; };
  const std::vector<std::string> steps = {
      "ingest --input " + fixture("corpus") + " --out statements.jsonl --gold " +
          fixture("gold.jsonl") + " --stats-out stats.json --conll-out gold.conll",
      "dp-map --trees " + fixture("parses.conllu") +
          " --statements statements.jsonl --out dp.jsonl",
      "srl-map --frames " + fixture("frames.jsonl") +
          " --statements statements.jsonl --out srl.jsonl",
      "ci-srl --frames " + fixture("frames.jsonl") +
          " --statements statements.jsonl --out ci_srl.jsonl"
          " --emit-refinement-report refinement.jsonl",
      "hmm-train --train gold.conll --out hmm.json",
      "hmm-tag --model hmm.json --input gold.conll --out hmm.conll --annotations-out hmm.jsonl",
      "report --gold " + fixture("gold.jsonl") +
          " --statements statements.jsonl --method dp=dp.jsonl --method srl=srl.jsonl"
          " --method ci-srl=ci_srl.jsonl --hmm-pred hmm.conll --hmm-gold gold.conll"
          " --out-dir report",
  };
  testing::TempDir root;
  std::vector<std::map<std::string, std::string>> runs;
  for (const char *name : {"run1", "run2"}) {
    std::filesystem::path dir = root / name;
    std::filesystem::create_directories(dir);
    for (const std::string &step : steps) {
      if (int code = RunIn(dir, step); code != 0) {
        return {false, std::string(name) + ": \"" + step.substr(0, step.find(' ')) +
                           "\" exited " + std::to_string(code)};
      }
    }
    runs.push_back(Snapshot(dir));
  }
  if (runs[0].size() != runs[1].size()) return {false, "runs wrote different file sets"};
  for (const auto &[path, bytes] : runs[0]) {
    auto it = runs[1].find(path);
    if (it == runs[1].end() || it->second != bytes) return {false, path + " differs"};
  }
  return {runs[0].size() >= 20, std::to_string(runs[0].size()) + " files byte-identical"};
}

}  // namespace
}  // namespace ciex

int main() {
  using Check = std::pair<const char *, std::function<ciex::Outcome()>>;
  const std::vector<Check> checks = {
      {"viterbi-oracle-equivalence", ciex::ViterbiMatchesExhaustiveSearch},
      {"transition-normalization", ciex::TransitionsNormalize},
      {"worked-examples", ciex::WorkedExamples},
      {"filter-direction", ciex::FilterImprovesPrecision},
      {"metrics-correctness", ciex::MetricsMatchSpreadsheet},
      {"filter-containment-idempotence", ciex::RefineContainmentAndIdempotence},
      {"end-to-end-determinism", ciex::PipelineIsDeterministic},
  };
  int failures = 0;
  for (const auto &[name, check] : checks) {
    ciex::Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception &e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failures += !outcome.pass;
    std::cout << (outcome.pass ? "PASS " : "FAIL ") << name << ": " << outcome.detail << '\n';
  }
  return failures == 0 ? 0 : 1;
}
