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


#include <gtest/gtest.h>

#include "test_support.hpp"

namespace ciex {
namespace {

using testing::FixturePath;
using testing::TempDir;
using testing::WriteFile;

TEST(ParamTest, NamesRoundTrip) {
  for (CIParam p : {CIParam::kSender, CIParam::kReceiver, CIParam::kSubject,
                    CIParam::kAttribute, CIParam::kTP, CIParam::kActor, CIParam::kO}) {
    EXPECT_EQ(ParseParam(ParamName(p)), p);
  }
  EXPECT_FALSE(ParseParam("Recipient").has_value());
}

TEST(SplitSentencesTest, TwoSentences) {
  EXPECT_EQ(SplitSentences("We collect data. We share data."),
            (std::vector<std::string>{"We collect data.", "We share data."}));
}

TEST(SplitSentencesTest, AbbreviationGuard) {
  EXPECT_EQ(SplitSentences("We use e.g. cookies to track you.").size(), 1u);
  EXPECT_EQ(SplitSentences("We use cookies, etc. Others do too.").size(), 1u);
}

TEST(SplitSentencesTest, ColonDoesNotSplitByDefault) {
  const std::string text =
      "We collect the following information: Your name and email address. "
      "We keep it.";
  EXPECT_EQ(SplitSentences(text).size(), 2u);
  SplitOptions colon;
  colon.split_on_colon = true;
  EXPECT_EQ(SplitSentences(text, colon).size(), 3u);
}

TEST(SplitSentencesTest, TerminatorRules) {
  EXPECT_EQ(SplitSentences("Is it shared? Yes! It is.").size(), 3u);
  EXPECT_EQ(SplitSentences("Version 2.0 applies. 3 rules follow.").size(), 2u);
  EXPECT_EQ(SplitSentences("We said \"stop.\" Then we left.").size(), 2u);
  EXPECT_EQ(SplitSentences("lowercase. continues here").size(), 1u);
  EXPECT_TRUE(SplitSentences("").empty());
  EXPECT_TRUE(SplitSentences("   \n ").empty());
}

TEST(SplitSentencesTest, NeverDropsCharacters) {
  std::mt19937_64 rng(11);
  const std::string alphabet = "ab .!?:\"')(Ae1 \n";
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    int len = static_cast<int>(rng() % 60);
    for (int i = 0; i < len; ++i) text += alphabet[rng() % alphabet.size()];
    for (bool colon : {false, true}) {
      SplitOptions options;
      options.split_on_colon = colon;
      std::string joined;
      for (const std::string &s : SplitSentences(text, options)) joined += s;
      EXPECT_EQ(RemoveWhitespace(joined), RemoveWhitespace(text)) << text;
    }
  }
}

TEST(TokenizeTest, DetachesPunctuation) {
  EXPECT_EQ(TokenizeWords("When you use Google services, we (may) collect \"data\"."),
            (std::vector<std::string>{"When", "you", "use", "Google", "services", ",", "we",
                                      "(", "may", ")", "collect", "\"", "data", "\"",
                                      "."}));
  EXPECT_EQ(TokenizeWords("We use e.g. cookies."),
            (std::vector<std::string>{"We", "use", "e.g.", "cookies", "."}));
  std::vector<Token> tokens = Tokenize("A b.");
  ASSERT_EQ(tokens.size(), 3u);
  EXPECT_EQ(tokens[2].index, 2);
  EXPECT_TRUE(TokensMatchText(tokens, "A b."));
}

TEST(SpanTest, CanonicalizeRemovesDuplicates) {
  std::vector<Span> spans = {{2, 4, CIParam::kAttribute, "b"},
                             {0, 1, CIParam::kSender, "a"},
                             {2, 4, CIParam::kAttribute, "a"},
                             {2, 4, CIParam::kTP, "a"}};
  CanonicalizeSpans(&spans);
  ASSERT_EQ(spans.size(), 3u);
  EXPECT_EQ(spans[0].param, CIParam::kSender);
  EXPECT_EQ(spans[1].source_tag, "a");
  EXPECT_EQ(spans[2].param, CIParam::kTP);
}

TEST(SpanTest, TagsInnermostWins) {
  std::vector<Span> spans = {{0, 4, CIParam::kAttribute, ""},
                             {0, 1, CIParam::kSubject, ""},
                             {3, 5, CIParam::kActor, ""}};
  std::vector<CIParam> tags = SpansToTags(6, spans);
  EXPECT_EQ(tags, (std::vector<CIParam>{CIParam::kSubject, CIParam::kAttribute,
                                        CIParam::kAttribute, CIParam::kAttribute,
                                        CIParam::kO, CIParam::kO}));
  std::vector<Span> back = TagsToSpans(tags, "hmm");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1], (Span{1, 4, CIParam::kAttribute, "hmm"}));
}

TEST(IngestTest, FixtureCorpus) {
  Corpus corpus = IngestCorpus(FixturePath("corpus"));
  EXPECT_EQ(corpus.statements.size(), 61u);
  EXPECT_EQ(corpus.skipped_segments, 3u);
  IngestOptions defaults;
  std::set<std::string> ids;
  for (const Statement &s : corpus.statements) {
    EXPECT_TRUE(internal::LabelAllowed(s.segment_label, defaults.allowed_labels)) << s.id;
    EXPECT_TRUE(TokensMatchText(s.tokens, s.raw_text)) << s.id;
    EXPECT_TRUE(ids.insert(s.id).second);
    for (size_t i = 0; i < s.tokens.size(); ++i) {
      EXPECT_EQ(s.tokens[i].index, static_cast<int>(i));
      EXPECT_FALSE(s.tokens[i].text.empty());
    }
  }
  EXPECT_EQ(corpus.statements.front().id, "p1/s1/0");
  EXPECT_EQ(corpus.statements.front().raw_text,
            "When you use Google services, we may collect and process information about "
            "your actual location.");
  // Deterministic across runs.
  EXPECT_EQ(IngestCorpus(FixturePath("corpus")).statements, corpus.statements);
}

TEST(IngestTest, AllowListAndLabels) {
  TempDir dir;
  WriteFile(dir / "a.jsonl",
            R"({"policy_id":"x","segment_id":"1","label":"First Party Collection/Use","text":"One. Two."})"
            "\n"
            R"({"policy_id":"x","segment_id":"2","label":"Policy Change","text":"Three."})"
            "\n"
            R"({"policy_id":"x","segment_id":"3","label":"Data Retention","text":"We keep it. We delete it."})"
            "\n");
  Corpus corpus = IngestCorpus(dir.path());
  ASSERT_EQ(corpus.statements.size(), 4u);
  EXPECT_EQ(corpus.skipped_segments, 1u);
  EXPECT_EQ(corpus.statements[2].id, "x/3/0");
  EXPECT_EQ(corpus.statements[3].raw_text, "We delete it.");

  IngestOptions only_retention;
  only_retention.allowed_labels = {"data retention"};
  EXPECT_EQ(IngestCorpus(dir.path(), only_retention).statements.size(), 2u);
}

TEST(IngestTest, EmptyDirectory) {
  TempDir dir;
  Corpus corpus = IngestCorpus(dir.path());
  EXPECT_TRUE(corpus.statements.empty());
}

TEST(IngestTest, Errors) {
  TempDir dir;
  EXPECT_THROW(
      {
        try {
          IngestCorpus(dir / "missing");
        } catch (const Error &e) {
          EXPECT_EQ(e.kind(), Error::Kind::kIo);
          throw;
        }
      },
      Error);
  WriteFile(dir / "bad.jsonl", "{\"policy_id\":\"x\"}\n");
  try {
    IngestCorpus(dir.path());
    FAIL() << "expected a validation error";
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), Error::Kind::kValidation);
    EXPECT_NE(std::string(e.what()).find("bad.jsonl:1"), std::string::npos) << e.what();
  }
  WriteFile(dir / "bad.jsonl", "not json\n");
  EXPECT_THROW(IngestCorpus(dir.path()), Error);
  WriteFile(dir / "bad.jsonl",
            R"({"policy_id":"x","segment_id":"1","label":"Data Retention","text":"A."})"
            "\n"
            R"({"policy_id":"x","segment_id":"1","label":"Data Retention","text":"B."})"
            "\n");
  EXPECT_THROW(IngestCorpus(dir.path()), Error);
}

TEST(CorpusStatsTest, FixtureCounts) {
  Corpus corpus = IngestCorpus(FixturePath("corpus"));
  std::vector<FlowAnnotation> gold = ReadAnnotations(FixturePath("gold.jsonl"));
  CorpusStats stats = ComputeCorpusStats(corpus.statements, gold);
  EXPECT_EQ(stats.statements, 61u);
  EXPECT_EQ(stats.valid_statements, 58u);
  EXPECT_EQ(stats.gold_spans, 222u);
  EXPECT_EQ(stats.min_valid_per_policy, 7u);
  EXPECT_EQ(stats.max_valid_per_policy, 12u);
  EXPECT_DOUBLE_EQ(stats.mean_valid_per_policy, 58.0 / 6.0);
  EXPECT_EQ(stats.valid_per_policy.at("p3"), 12u);
  EXPECT_EQ(ComputeCorpusStats(corpus.statements, gold), stats);
}

TEST(CorpusStatsTest, NoGold) {
  Corpus corpus = IngestCorpus(FixturePath("corpus"));
  CorpusStats stats = ComputeCorpusStats(corpus.statements, {});
  EXPECT_EQ(stats.valid_statements, 0u);
  EXPECT_EQ(stats.gold_spans, 0u);
}

TEST(CorpusStatsTest, DanglingIdsAreListed) {
  Corpus corpus = IngestCorpus(FixturePath("corpus"));
  FlowAnnotation a{"nope/1/0", "gold", true, {}, false, std::nullopt};
  FlowAnnotation b{"nope/2/0", "gold", true, {}, false, std::nullopt};
  try {
    ComputeCorpusStats(corpus.statements, {a, b});
    FAIL();
  } catch (const Error &e) {
    std::string message = e.what();
    EXPECT_NE(message.find("nope/1/0"), std::string::npos);
    EXPECT_NE(message.find("nope/2/0"), std::string::npos);
  }
}

TEST(AnnotationIoTest, RoundTrip) {
  TempDir dir;
  std::vector<FlowAnnotation> in = {
      {"a/1/0", "gold", true, {{0, 1, CIParam::kSender, "gold"}}, false, std::nullopt},
      {"a/1/1", "srl", std::nullopt, {}, true, std::string("user")},
      {"a/1/2", "dp", false, {{1, 3, CIParam::kActor, "pron"}}, false, std::nullopt}};
  WriteAnnotations(in, dir / "a.jsonl");
  EXPECT_EQ(ReadAnnotations(dir / "a.jsonl"), in);
  std::string text = testing::ReadFile(dir / "a.jsonl");
  EXPECT_NE(text.find("\"valid\":null"), std::string::npos);
}

TEST(AnnotationIoTest, RejectsBadSpans) {
  TempDir dir;
  for (const char *line :
       {R"({"statement_id":"a","method":"m","spans":[{"start":2,"end":2,"param":"TP"}]})",
        R"({"statement_id":"a","method":"m","spans":[{"start":0,"end":1,"param":"O"}]})",
        R"({"statement_id":"a","method":"m","spans":[{"start":0,"end":1,"param":"Recipient"}]})",
        R"({"statement_id":"a","method":"m","valid":"yes","spans":[]})",
        R"({"statement_id":"a","spans":[]})"}) {
    WriteFile(dir / "x.jsonl", std::string(line) + "\n");
    EXPECT_THROW(ReadAnnotations(dir / "x.jsonl"), Error) << line;
  }
}

TEST(StatementIoTest, RoundTrip) {
  TempDir dir;
  Corpus corpus = IngestCorpus(FixturePath("corpus"));
  WriteStatements(corpus.statements, dir / "s.jsonl");
  EXPECT_EQ(ReadStatements(dir / "s.jsonl"), corpus.statements);
}

}  // namespace
}  // namespace ciex
