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

// ci-extract: command line driver for ingestion, tagging, mapping,
// refinement, scoring and reporting.
//
// Exit codes: 0 success, 1 validation error, 2 I/O error.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ciextract/ciextract.hpp"

namespace fs = std::filesystem;

namespace ciex {
namespace {

// Flags that may override config values; unset optionals leave the config
// untouched.
struct Overrides {
  std::string config_path;
  std::string manifest_path;
  std::vector<std::string> allowed_labels;
  bool split_on_colon = false;
  std::optional<double> lambda1;
  std::optional<double> lambda2;
  std::optional<double> grid_step;
  std::string dp_rules;
  std::string verb_lexicon;
  std::string match;
  std::optional<double> threshold;
  bool include_invalid = false;
  bool fixpoint = false;
  std::optional<uint64_t> seed;
  std::vector<double> histogram_edges;
};

PipelineConfig ResolveConfig(const Overrides &o) {
  PipelineConfig config;
  std::string path = o.config_path;
  if (path.empty()) {
    if (const char *env = std::getenv(kConfigEnvVar)) path = env;
  }
  if (!path.empty()) config = LoadPipelineConfig(path);
  if (!o.allowed_labels.empty()) config.allowed_labels = o.allowed_labels;
  if (o.split_on_colon) config.split_on_colon = true;
  if (o.lambda1) config.lambda1 = *o.lambda1;
  if (o.lambda2) config.lambda2 = *o.lambda2;
  if (o.grid_step) config.grid_step = *o.grid_step;
  if (!o.dp_rules.empty()) config.dp_rules = o.dp_rules;
  if (!o.verb_lexicon.empty()) config.verb_lexicon = o.verb_lexicon;
  if (!o.match.empty()) config.match.criterion = ParseCriterion(o.match);
  if (o.threshold) config.match.overlap_threshold = *o.threshold;
  if (o.include_invalid) config.valid_only = false;
  if (o.fixpoint) config.fixpoint = true;
  if (o.seed) config.seed = *o.seed;
  if (!o.histogram_edges.empty()) config.histogram_edges = o.histogram_edges;
  config.Validate();
  return config;
}

void RequireFile(const std::string &path) {
  if (!fs::exists(path)) throw IoError("input does not exist: " + path);
}

void Finish(const Overrides &o, const PipelineConfig &config, RunManifest run) {
  fs::path manifest = o.manifest_path;
  if (manifest.empty()) {
    if (run.outputs.empty()) return;
    manifest = run.outputs.front().string() + ".manifest.json";
  }
  WriteManifest(run, config, manifest);
}

IngestOptions MakeIngestOptions(const PipelineConfig &config) {
  IngestOptions options;
  options.allowed_labels = config.allowed_labels;
  options.split.split_on_colon = config.split_on_colon;
  return options;
}

std::map<std::string, std::string> PolicyIndex(const std::vector<Statement> &statements) {
  std::map<std::string, std::string> index;
  for (const Statement &s : statements) index[s.id] = s.policy_id;
  return index;
}

// Policy ids derived from statement ids ("policy/segment/n") when no
// statements file is supplied.
std::map<std::string, std::string> PolicyIndexFromIds(const std::vector<FlowAnnotation> &gold) {
  std::map<std::string, std::string> index;
  for (const FlowAnnotation &g : gold) {
    index[g.statement_id] = g.statement_id.substr(0, g.statement_id.find('/'));
  }
  return index;
}

// Orders per-statement outputs by the statements file when one is given,
// emitting empty unprocessed annotations for statements without frames.
template <typename Fn>
std::vector<FlowAnnotation> AnnotateFrames(const std::vector<SrlFrame> &frames,
                                           const std::string &statements_path, Fn &&annotate) {
  std::vector<std::vector<SrlFrame>> groups = GroupFramesByStatement(frames);
  std::vector<FlowAnnotation> out;
  if (statements_path.empty()) {
    for (const auto &group : groups) out.push_back(annotate(group.front().statement_id, group));
    return out;
  }
  std::map<std::string, const std::vector<SrlFrame> *> by_id;
  for (const auto &group : groups) by_id[group.front().statement_id] = &group;
  std::set<std::string> emitted;
  static const std::vector<SrlFrame> kNoFrames;
  for (const Statement &s : ReadStatements(statements_path)) {
    auto it = by_id.find(s.id);
    out.push_back(annotate(s.id, it == by_id.end() ? kNoFrames : *it->second));
    emitted.insert(s.id);
  }
  for (const auto &group : groups) {
    const std::string &id = group.front().statement_id;
    if (!emitted.count(id)) {
      std::cerr << "warning: frames for unknown statement " << id << '\n';
      out.push_back(annotate(id, group));
    }
  }
  return out;
}

void WarnTokenMismatches(const std::vector<DepTree> &trees, const std::string &statements_path) {
  if (statements_path.empty()) return;
  std::map<std::string, std::vector<std::string>> tokens;
  for (const Statement &s : ReadStatements(statements_path)) {
    for (const Token &t : s.tokens) tokens[s.id].push_back(t.text);
  }
  for (const DepTree &tree : trees) {
    auto it = tokens.find(tree.statement_id);
    if (it == tokens.end()) {
      std::cerr << "warning: parse for unknown statement " << tree.statement_id << '\n';
      continue;
    }
    std::vector<std::string> parsed;
    for (const Token &t : tree.tokens) parsed.push_back(t.text);
    if (parsed != it->second) {
      std::cerr << "warning: " << tree.statement_id
                << ": parse tokenization differs from the statement; using the parse\n";
    }
  }
}

std::vector<TaggedSentence> GoldToTagged(const std::vector<Statement> &statements,
                                         const std::vector<FlowAnnotation> &gold) {
  std::map<std::string, const Statement *> by_id;
  for (const Statement &s : statements) by_id[s.id] = &s;
  std::vector<TaggedSentence> out;
  for (const FlowAnnotation &g : gold) {
    auto it = by_id.find(g.statement_id);
    if (it == by_id.end()) {
      throw ValidationError("gold annotation for unknown statement " + g.statement_id);
    }
    const Statement &s = *it->second;
    for (const Span &span : g.spans) {
      if (span.end > static_cast<int>(s.tokens.size())) {
        throw ValidationError(g.statement_id + ": gold span exceeds sentence length");
      }
    }
    out.push_back(TaggedSentence{
        s.id, s.tokens, SpansToTags(static_cast<int>(s.tokens.size()), g.spans)});
  }
  return out;
}

std::string PhraseTableCsv(const std::vector<std::pair<std::string, std::vector<ParamScore>>> &rows,
                           const PipelineConfig &config) {
  std::string csv = ScoreTableHeader();
  for (const auto &[method, scores] : rows) csv += ScoreTableRows(method, scores);
  csv += std::string(kMacroNote) + "\n";
  csv += "# parameters a method never predicts are omitted\n";
  csv += "# match=" + std::string(config.match.criterion == MatchCriterion::kExact ? "exact"
                                                                                   : "overlap") +
         " threshold=" + FormatRatio(config.match.overlap_threshold, 2) +
         (config.valid_only ? " statements=valid-only" : " statements=all") + "\n";
  return csv;
}

}  // namespace
}  // namespace ciex

int main(int argc, char **argv) {
  using namespace ciex;
  CLI::App app{"Contextual integrity parameter extraction from privacy statements"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  Overrides o;
  app.add_option("--config", o.config_path,
                 "JSON pipeline config (default: $CI_EXTRACTOR_CONFIG)");
  app.add_option("--manifest", o.manifest_path,
                 "Run manifest path (default: <first output>.manifest.json)");

  // ingest
  std::string input_dir, out_path, gold_path, stats_out, conll_out;
  CLI::App *ingest = app.add_subcommand("ingest", "Read segment files into statements");
  ingest->add_option("--input", input_dir, "Directory of segment JSON-lines files")->required();
  ingest->add_option("--out", out_path, "Statements JSON-lines output")->required();
  ingest->add_option("--allow-label", o.allowed_labels, "Segment label to keep (repeatable)");
  ingest->add_flag("--split-on-colon", o.split_on_colon, "Also split sentences at colons");
  ingest->add_option("--gold", gold_path, "Gold annotations for statistics");
  ingest->add_option("--stats-out", stats_out, "Corpus statistics JSON (needs --gold)");
  ingest->add_option("--conll-out", conll_out, "Gold token tags as CoNLL-2003 (needs --gold)");

  // split
  std::string text, text_file;
  CLI::App *split = app.add_subcommand("split", "Split text into sentences");
  split->add_option("--text", text, "Text to split");
  split->add_option("--input", text_file, "Plain text file to split");
  split->add_option("--out", out_path, "Output, one sentence per line (default: stdout)");
  split->add_flag("--split-on-colon", o.split_on_colon, "Also split sentences at colons");

  // hmm-train
  std::string train_path, model_path;
  CLI::App *hmm_train = app.add_subcommand("hmm-train", "Train the trigram HMM tagger");
  hmm_train->add_option("--train", train_path, "CoNLL-2003 training file")->required();
  hmm_train->add_option("--lambda1", o.lambda1, "Trigram weight");
  hmm_train->add_option("--lambda2", o.lambda2, "Bigram weight");
  hmm_train->add_option("--out", out_path, "Model JSON output")->required();

  // hmm-tag
  std::string conll_in, statements_path, annotations_out;
  CLI::App *hmm_tag = app.add_subcommand("hmm-tag", "Tag sentences with a trained HMM");
  hmm_tag->add_option("--model", model_path, "Model JSON")->required();
  hmm_tag->add_option("--input", conll_in, "CoNLL-2003 input (labels ignored)");
  hmm_tag->add_option("--statements", statements_path, "Statements JSON-lines input");
  hmm_tag->add_option("--out", out_path, "Tagged CoNLL-2003 output")->required();
  hmm_tag->add_option("--annotations-out", annotations_out, "Tag runs as annotation spans");

  // hmm-tune
  std::string validation_path, data_path;
  double validation_fraction = 0.2;
  CLI::App *hmm_tune = app.add_subcommand("hmm-tune", "Grid-search interpolation weights");
  hmm_tune->add_option("--train", train_path, "CoNLL-2003 training file");
  hmm_tune->add_option("--validation", validation_path, "CoNLL-2003 validation file");
  hmm_tune->add_option("--data", data_path, "Single CoNLL-2003 file split by --seed");
  hmm_tune->add_option("--validation-fraction", validation_fraction, "Held-out share for --data");
  hmm_tune->add_option("--seed", o.seed, "Seed for the --data split");
  hmm_tune->add_option("--grid-step", o.grid_step, "Grid step in (0, 0.5]");
  hmm_tune->add_option("--out", out_path, "Tuned weights JSON")->required();

  // dp-map
  std::string trees_path;
  CLI::App *dp_map = app.add_subcommand("dp-map", "Map dependency parses to CI spans");
  dp_map->add_option("--trees", trees_path, "CoNLL-U parses")->required();
  dp_map->add_option("--dp-rules", o.dp_rules, "Dependency rule file");
  dp_map->add_option("--statements", statements_path, "Statements for tokenization checks");
  dp_map->add_option("--out", out_path, "Annotation JSON-lines output")->required();

  // srl-map
  std::string frames_path;
  CLI::App *srl_map = app.add_subcommand("srl-map", "Map SRL frames to CI spans");
  srl_map->add_option("--frames", frames_path, "SRL frame JSON-lines")->required();
  srl_map->add_option("--verb-lexicon", o.verb_lexicon, "Verb lexicon file");
  srl_map->add_option("--statements", statements_path, "Statements fixing output order");
  srl_map->add_option("--out", out_path, "Annotation JSON-lines output")->required();

  // ci-srl
  std::string refinement_report;
  CLI::App *ci_srl = app.add_subcommand("ci-srl", "SRL mapping with the redundant-verb filter");
  ci_srl->add_option("--frames", frames_path, "SRL frame JSON-lines")->required();
  ci_srl->add_option("--verb-lexicon", o.verb_lexicon, "Verb lexicon file");
  ci_srl->add_option("--statements", statements_path, "Statements fixing output order");
  ci_srl->add_option("--out", out_path, "Annotation JSON-lines output")->required();
  ci_srl->add_option("--emit-refinement-report", refinement_report, "Refinement audit JSON-lines");
  ci_srl->add_flag("--fixpoint", o.fixpoint, "Only surviving frames make others redundant");

  // score
  std::string pred_path, mode = "phrase-macro", method_name, tag_dist_out, histogram_out,
                         summary_out;
  CLI::App *score = app.add_subcommand("score", "Score predictions against gold");
  score->add_option("--pred", pred_path, "Predictions (annotations or CoNLL-2003)")->required();
  score->add_option("--gold", gold_path, "Gold (annotations or CoNLL-2003)")->required();
  score->add_option("--mode", mode, "phrase-macro or word-level")
      ->check(CLI::IsMember({"phrase-macro", "word-level"}));
  score->add_option("--match", o.match, "overlap or exact");
  score->add_option("--threshold", o.threshold, "Minimum shared fraction of the gold span");
  score->add_option("--statements", statements_path, "Statements (policy ids)");
  score->add_option("--method-name", method_name, "Method label in the table");
  score->add_option("--out", out_path, "Score CSV output")->required();
  score->add_option("--tag-dist", tag_dist_out, "Per-source-tag TP/FP CSV");
  score->add_option("--histogram", histogram_out, "Per-policy F1 histogram CSV");
  score->add_option("--histogram-edges", o.histogram_edges, "Bin edges in percent");
  score->add_option("--summary", summary_out, "JSON summary");
  score->add_flag("--include-invalid", o.include_invalid, "Also score statements marked invalid");

  // report
  std::vector<std::string> method_specs;
  std::string hmm_pred, hmm_gold, out_dir, histogram_method;
  CLI::App *report = app.add_subcommand("report", "Write all score tables and figures");
  report->add_option("--gold", gold_path, "Gold annotations")->required();
  report->add_option("--statements", statements_path, "Statements (policy ids)");
  report->add_option("--method", method_specs, "name=annotations.jsonl (repeatable)");
  report->add_option("--hmm-pred", hmm_pred, "HMM predicted CoNLL-2003");
  report->add_option("--hmm-gold", hmm_gold, "HMM gold CoNLL-2003");
  report->add_option("--histogram-method", histogram_method, "Method for the policy histogram");
  report->add_option("--histogram-edges", o.histogram_edges, "Bin edges in percent");
  report->add_option("--match", o.match, "overlap or exact");
  report->add_option("--threshold", o.threshold, "Minimum shared fraction of the gold span");
  report->add_flag("--include-invalid", o.include_invalid, "Also score statements marked invalid");
  report->add_option("--out-dir", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    PipelineConfig config = ResolveConfig(o);
    RunManifest run;

    if (*ingest) {
      run.subcommand = "ingest";
      Corpus corpus = IngestCorpus(input_dir, MakeIngestOptions(config));
      run.inputs.push_back(input_dir);
      WriteStatements(corpus.statements, out_path);
      run.outputs.push_back(out_path);
      if (corpus.skipped_segments > 0) {
        std::cerr << "warning: skipped " << corpus.skipped_segments
                  << " segment(s) with labels outside the allow-list\n";
      }
      if ((!stats_out.empty() || !conll_out.empty()) && gold_path.empty()) {
        throw ValidationError("--stats-out and --conll-out need --gold");
      }
      if (!gold_path.empty()) {
        std::vector<FlowAnnotation> gold = ReadAnnotations(gold_path);
        run.inputs.push_back(gold_path);
        CorpusStats stats = ComputeCorpusStats(corpus.statements, gold);
        if (!stats_out.empty()) {
          WriteText(stats_out, StatsToJson(stats).dump(2) + "\n");
          run.outputs.push_back(stats_out);
        }
        if (!conll_out.empty()) {
          WriteConll2003(GoldToTagged(corpus.statements, gold), conll_out);
          run.outputs.push_back(conll_out);
        }
      }
    } else if (*split) {
      run.subcommand = "split";
      if (text.empty() == text_file.empty()) {
        throw ValidationError("give exactly one of --text and --input");
      }
      if (!text_file.empty()) {
        std::ifstream in = internal::OpenInput(text_file);
        std::stringstream buffer;
        buffer << in.rdbuf();
        text = buffer.str();
        run.inputs.push_back(text_file);
      }
      SplitOptions options;
      options.split_on_colon = config.split_on_colon;
      std::string joined;
      for (const std::string &s : SplitSentences(text, options)) joined += s + "\n";
      if (out_path.empty()) {
        std::cout << joined;
      } else {
        WriteText(out_path, joined);
        run.outputs.push_back(out_path);
      }
    } else if (*hmm_train) {
      run.subcommand = "hmm-train";
      RequireFile(train_path);
      HmmModel model = TrainHmm(ReadConll2003(train_path), config.lambda1, config.lambda2);
      SaveModel(model, out_path);
      run.inputs.push_back(train_path);
      run.outputs.push_back(out_path);
    } else if (*hmm_tag) {
      run.subcommand = "hmm-tag";
      if (conll_in.empty() == statements_path.empty()) {
        throw ValidationError("give exactly one of --input and --statements");
      }
      HmmModel model = LoadModel(model_path);
      run.inputs.push_back(model_path);
      std::vector<TaggedSentence> input;
      if (!conll_in.empty()) {
        input = ReadConll2003(conll_in);
        run.inputs.push_back(conll_in);
      } else {
        for (const Statement &s : ReadStatements(statements_path)) {
          input.push_back(TaggedSentence{s.id, s.tokens, {}});
        }
        run.inputs.push_back(statements_path);
      }
      std::vector<TaggedSentence> tagged = TagSentences(model, input);
      WriteConll2003(tagged, out_path);
      run.outputs.push_back(out_path);
      if (!annotations_out.empty()) {
        std::vector<FlowAnnotation> annotations;
        for (const TaggedSentence &s : tagged) {
          annotations.push_back(FlowAnnotation{s.statement_id, "hmm", std::nullopt,
                                               TagsToSpans(s.tags, "hmm"), false, std::nullopt});
        }
        WriteAnnotations(annotations, annotations_out);
        run.outputs.push_back(annotations_out);
      }
    } else if (*hmm_tune) {
      run.subcommand = "hmm-tune";
      std::vector<TaggedSentence> train, validation;
      if (!data_path.empty()) {
        if (!train_path.empty() || !validation_path.empty()) {
          throw ValidationError("--data excludes --train/--validation");
        }
        std::tie(train, validation) =
            SeededSplit(ReadConll2003(data_path), validation_fraction, config.seed);
        run.inputs.push_back(data_path);
      } else {
        if (train_path.empty() || validation_path.empty()) {
          throw ValidationError("hmm-tune needs --train and --validation, or --data");
        }
        train = ReadConll2003(train_path);
        validation = ReadConll2003(validation_path);
        run.inputs.push_back(train_path);
        run.inputs.push_back(validation_path);
      }
      TunedLambdas tuned = TuneLambdas(train, validation, config.grid_step);
      nlohmann::ordered_json out;
      out["lambda1"] = tuned.lambda1;
      out["lambda2"] = tuned.lambda2;
      out["validation_accuracy"] = tuned.accuracy;
      out["grid_step"] = config.grid_step;
      out["train_sentences"] = train.size();
      out["validation_sentences"] = validation.size();
      WriteText(out_path, out.dump(2) + "\n");
      run.outputs.push_back(out_path);
    } else if (*dp_map) {
      run.subcommand = "dp-map";
      DepMappingRules rules;
      if (!config.dp_rules.empty()) {
        rules = LoadDepRules(config.dp_rules);
        run.inputs.push_back(config.dp_rules);
      }
      std::vector<DepTree> trees = ReadConllu(trees_path);
      run.inputs.push_back(trees_path);
      WarnTokenMismatches(trees, statements_path);
      std::vector<FlowAnnotation> annotations;
      for (const DepTree &tree : trees) annotations.push_back(MapDependencies(tree, rules));
      WriteAnnotations(annotations, out_path);
      run.outputs.push_back(out_path);
    } else if (*srl_map || *ci_srl) {
      bool refine = ci_srl->parsed();
      run.subcommand = refine ? "ci-srl" : "srl-map";
      VerbLexicon lexicon;
      if (!config.verb_lexicon.empty()) {
        lexicon = LoadVerbLexicon(config.verb_lexicon);
        run.inputs.push_back(config.verb_lexicon);
      }
      std::vector<SrlFrame> frames = ReadSrlFrames(frames_path);
      run.inputs.push_back(frames_path);
      if (!statements_path.empty()) run.inputs.push_back(statements_path);
      RedundancyMode redundancy =
          config.fixpoint ? RedundancyMode::kFixpoint : RedundancyMode::kSinglePass;
      std::vector<RefinementReport> reports;
      size_t unprocessed = 0;
      std::vector<FlowAnnotation> annotations = AnnotateFrames(
          frames, statements_path,
          [&](const std::string &id, const std::vector<SrlFrame> &group) {
            FlowAnnotation a;
            if (refine) {
              Refinement r = Refine(id, group, lexicon, redundancy);
              reports.push_back(std::move(r.report));
              a = std::move(r.annotation);
            } else {
              a = ExtractStatement(id, group, lexicon);
            }
            unprocessed += a.unprocessed;
            return a;
          });
      WriteAnnotations(annotations, out_path);
      run.outputs.push_back(out_path);
      if (!refinement_report.empty()) {
        WriteRefinementReports(reports, refinement_report);
        run.outputs.push_back(refinement_report);
      }
      if (unprocessed > 0) {
        std::cerr << "note: " << unprocessed
                  << " statement(s) had no tracked predicate and were not processed\n";
      }
    } else if (*score) {
      run.subcommand = "score";
      run.inputs.push_back(pred_path);
      run.inputs.push_back(gold_path);
      std::string name = method_name.empty() ? mode : method_name;
      nlohmann::ordered_json summary;
      summary["method"] = name;
      if (mode == "word-level") {
        std::vector<ParamScore> scores =
            WordLevelScores(ReadConll2003(pred_path), ReadConll2003(gold_path));
        WriteText(out_path, ScoreTableHeader() + ScoreTableRows(name, scores));
        summary["scores"] = ScoresToJson(scores);
      } else {
        std::vector<FlowAnnotation> pred = ReadAnnotations(pred_path);
        std::vector<FlowAnnotation> gold = ReadAnnotations(gold_path);
        std::map<std::string, std::string> policies;
        if (!statements_path.empty()) {
          policies = PolicyIndex(ReadStatements(statements_path));
          run.inputs.push_back(statements_path);
        } else {
          policies = PolicyIndexFromIds(gold);
        }
        std::vector<StatementScore> scored =
            ScoreCorpus(pred, gold, policies, config.match, config.valid_only);
        std::vector<ParamScore> scores = PredictedOnly(MacroAverage(scored));
        WriteText(out_path, PhraseTableCsv({{name, scores}}, config));
        summary["scores"] = ScoresToJson(scores);
        if (!tag_dist_out.empty()) {
          WriteText(tag_dist_out, TagDistributionCsv(name, TagDistribution(scored)));
          run.outputs.push_back(tag_dist_out);
        }
        PolicyHistogram hist = PerPolicyF1(scored, config.histogram_edges);
        summary["policy_histogram"] = HistogramToJson(hist);
        if (!histogram_out.empty()) {
          WriteText(histogram_out, HistogramCsv(hist));
          run.outputs.push_back(histogram_out);
        }
      }
      run.outputs.insert(run.outputs.begin(), out_path);
      if (!summary_out.empty()) {
        WriteText(summary_out, summary.dump(2) + "\n");
        run.outputs.push_back(summary_out);
      }
    } else if (*report) {
      run.subcommand = "report";
      std::vector<FlowAnnotation> gold = ReadAnnotations(gold_path);
      run.inputs.push_back(gold_path);
      std::map<std::string, std::string> policies;
      if (!statements_path.empty()) {
        policies = PolicyIndex(ReadStatements(statements_path));
        run.inputs.push_back(statements_path);
      } else {
        policies = PolicyIndexFromIds(gold);
      }
      fs::path dir = out_dir;
      std::vector<std::pair<std::string, std::vector<ParamScore>>> table;
      std::map<std::string, std::vector<StatementScore>> scored_by_method;
      nlohmann::ordered_json summary;
      summary["methods"] = nlohmann::ordered_json::object();
      for (const std::string &entry : method_specs) {
        size_t eq = entry.find('=');
        if (eq == std::string::npos || eq == 0) {
          throw ValidationError("--method expects name=path, got " + entry);
        }
        std::string name = entry.substr(0, eq);
        std::string path = entry.substr(eq + 1);
        std::vector<StatementScore> scored =
            ScoreCorpus(ReadAnnotations(path), gold, policies, config.match, config.valid_only);
        run.inputs.push_back(path);
        std::vector<ParamScore> scores = PredictedOnly(MacroAverage(scored));
        table.emplace_back(name, scores);
        summary["methods"][name] = ScoresToJson(scores);
        fs::path dist = dir / ("tag_distribution_" + name + ".csv");
        WriteText(dist, TagDistributionCsv(name, TagDistribution(scored)));
        run.outputs.push_back(dist);
        scored_by_method[name] = std::move(scored);
      }
      fs::path phrase = dir / "phrase_scores.csv";
      WriteText(phrase, PhraseTableCsv(table, config));
      run.outputs.insert(run.outputs.begin(), phrase);
      if (!hmm_pred.empty() || !hmm_gold.empty()) {
        if (hmm_pred.empty() || hmm_gold.empty()) {
          throw ValidationError("--hmm-pred and --hmm-gold go together");
        }
        std::vector<ParamScore> word = WordLevelScores(ReadConll2003(hmm_pred),
                                                       ReadConll2003(hmm_gold));
        fs::path word_path = dir / "word_scores.csv";
        WriteText(word_path, ScoreTableHeader() + ScoreTableRows("hmm", word));
        run.inputs.push_back(hmm_pred);
        run.inputs.push_back(hmm_gold);
        run.outputs.push_back(word_path);
        summary["word_level"] = ScoresToJson(word);
      }
      if (histogram_method.empty() && !table.empty()) {
        histogram_method = scored_by_method.count("ci-srl") ? "ci-srl" : table.back().first;
      }
      if (!histogram_method.empty()) {
        auto it = scored_by_method.find(histogram_method);
        if (it == scored_by_method.end()) {
          throw ValidationError("no method named " + histogram_method);
        }
        PolicyHistogram hist = PerPolicyF1(it->second, config.histogram_edges);
        fs::path hist_path = dir / "policy_histogram.csv";
        WriteText(hist_path, HistogramCsv(hist));
        run.outputs.push_back(hist_path);
        summary["policy_histogram"] = HistogramToJson(hist);
        summary["policy_histogram"]["method"] = histogram_method;
      }
      summary["notes"] = {std::string(kMacroNote).substr(2),
                          "reference columns are published figures from a 36-policy "
                          "evaluation and are not expected to be reproduced here"};
      fs::path summary_path = dir / "summary.json";
      WriteText(summary_path, summary.dump(2) + "\n");
      run.outputs.push_back(summary_path);
    }
    Finish(o, config, run);
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == Error::Kind::kIo ? 2 : 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
