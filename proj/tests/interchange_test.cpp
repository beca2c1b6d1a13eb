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
using testing::ReadFile;
using testing::TempDir;
using testing::WriteFile;

std::string ErrorText(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.what();
  }
  return "";
}

TEST(Conll2003Test, TwoLineFile) {
  TempDir dir;
  WriteFile(dir / "a.conll", "We Sender\ncollect O\n");
  std::vector<TaggedSentence> s = ReadConll2003(dir / "a.conll");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].tags, (std::vector<CIParam>{CIParam::kSender, CIParam::kO}));
  EXPECT_EQ(s[0].tokens[1].text, "collect");
  EXPECT_EQ(s[0].statement_id, "sent-1");
}

TEST(Conll2003Test, EmptyFile) {
  TempDir dir;
  WriteFile(dir / "a.conll", "");
  EXPECT_TRUE(ReadConll2003(dir / "a.conll").empty());
}

TEST(Conll2003Test, DocstartAndSentenceIds) {
  TempDir dir;
  WriteFile(dir / "a.conll",
            "-DOCSTART- O\n\n# sent_id = p/s/0\nWe\tReceiver\n\nshare O\ndata Attribute\n");
  std::vector<TaggedSentence> s = ReadConll2003(dir / "a.conll");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].statement_id, "p/s/0");
  EXPECT_EQ(s[1].statement_id, "sent-2");
  EXPECT_EQ(s[1].tags[1], CIParam::kAttribute);
}

TEST(Conll2003Test, Errors) {
  TempDir dir;
  WriteFile(dir / "a.conll", "We Sender\nus Recipient\n");
  EXPECT_NE(ErrorText([&] { ReadConll2003(dir / "a.conll"); }).find("a.conll:2"),
            std::string::npos);
  WriteFile(dir / "a.conll", "We Sender extra\n");
  EXPECT_NE(ErrorText([&] { ReadConll2003(dir / "a.conll"); }).find("a.conll:1"),
            std::string::npos);
  WriteFile(dir / "a.conll", "We B-Sender\n");
  EXPECT_THROW(ReadConll2003(dir / "a.conll"), Error);
  WriteFile(dir / "a.conll", "We Actor\n");
  EXPECT_THROW(ReadConll2003(dir / "a.conll"), Error);
  try {
    ReadConll2003(dir / "missing.conll");
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.kind(), Error::Kind::kIo);
  }
}

TEST(Conll2003Test, RoundTrip) {
  TempDir dir;
  std::vector<TaggedSentence> in = {
      testing::Tagged("a", "We share data", {CIParam::kSender, CIParam::kO, CIParam::kAttribute}),
      testing::Tagged("b", "x", {CIParam::kTP})};
  WriteConll2003(in, dir / "a.conll");
  EXPECT_EQ(ReadConll2003(dir / "a.conll"), in);
}

TEST(ConlluTest, ThreeTokenTree) {
  TempDir dir;
  WriteFile(dir / "a.conllu",
            "# sent_id = t1\n"
            "1\tWe\twe\tPRON\t_\t_\t2\tnsubj\t_\t_\n"
            "2\tcollect\tcollect\tVERB\t_\t_\t0\troot\t_\t_\n"
            "3\tdata\t_\t_\t_\t_\t2\tdobj\t_\t_\n\n");
  std::vector<DepTree> trees = ReadConllu(dir / "a.conllu");
  ASSERT_EQ(trees.size(), 1u);
  EXPECT_EQ(trees[0].root(), 1);
  EXPECT_EQ(trees[0].heads, (std::vector<int>{1, -1, 1}));
  EXPECT_EQ(trees[0].tokens[0].pos, "PRON");
  EXPECT_FALSE(trees[0].tokens[2].lemma.has_value());
  EXPECT_FALSE(trees[0].tokens[2].pos.has_value());
}

TEST(ConlluTest, SingleToken) {
  TempDir dir;
  WriteFile(dir / "a.conllu", "# sent_id = t\n1\tHello\thello\tINTJ\t_\t_\t0\troot\t_\t_\n");
  std::vector<DepTree> trees = ReadConllu(dir / "a.conllu");
  ASSERT_EQ(trees.size(), 1u);
  EXPECT_EQ(trees[0].root(), 0);
}

TEST(ConlluTest, SkipsMultiwordAndEmptyNodes) {
  TempDir dir;
  WriteFile(dir / "a.conllu",
            "# sent_id = t\n"
            "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n"
            "1\tdo\tdo\tAUX\t_\t_\t3\taux\t_\t_\n"
            "2\tn't\tnot\tPART\t_\t_\t3\tneg\t_\t_\n"
            "3\tsell\tsell\tVERB\t_\t_\t0\troot\t_\t_\n"
            "3.1\tit\t_\t_\t_\t_\t_\t_\t_\t_\n\n");
  EXPECT_EQ(ReadConllu(dir / "a.conllu")[0].size(), 3);
}

TEST(ConlluTest, Errors) {
  TempDir dir;
  const std::string header = "# sent_id = t\n";
  WriteFile(dir / "a.conllu", header + "1\ta\t_\t_\t_\t_\t0\troot\t_\t_\n" +
                                  "2\tb\t_\t_\t_\t_\t0\troot\t_\t_\n");
  EXPECT_NE(ErrorText([&] { ReadConllu(dir / "a.conllu"); }).find("one root"), std::string::npos);
  WriteFile(dir / "a.conllu", header + "1\ta\t_\t_\t_\t_\t2\tx\t_\t_\n" +
                                  "2\tb\t_\t_\t_\t_\t1\tx\t_\t_\n" +
                                  "3\tc\t_\t_\t_\t_\t0\troot\t_\t_\n");
  EXPECT_NE(ErrorText([&] { ReadConllu(dir / "a.conllu"); }).find("cyclic"), std::string::npos);
  WriteFile(dir / "a.conllu", "1\ta\t_\t_\t_\t_\t0\troot\t_\t_\n");
  EXPECT_NE(ErrorText([&] { ReadConllu(dir / "a.conllu"); }).find("sent_id"), std::string::npos);
  WriteFile(dir / "a.conllu", header + "1\ta\t_\t_\t_\t_\t0\troot\n");
  EXPECT_NE(ErrorText([&] { ReadConllu(dir / "a.conllu"); }).find("a.conllu:2"),
            std::string::npos);
  WriteFile(dir / "a.conllu", header + "1\ta\t_\t_\t_\t_\t5\tx\t_\t_\n");
  EXPECT_THROW(ReadConllu(dir / "a.conllu"), Error);
  WriteFile(dir / "a.conllu", header + "2\ta\t_\t_\t_\t_\t0\troot\t_\t_\n");
  EXPECT_THROW(ReadConllu(dir / "a.conllu"), Error);
}

TEST(ConlluTest, FixtureRoundTrip) {
  TempDir dir;
  std::vector<DepTree> trees = ReadConllu(FixturePath("parses.conllu"));
  EXPECT_EQ(trees.size(), 61u);
  WriteConllu(trees, dir / "a.conllu");
  std::vector<DepTree> again = ReadConllu(dir / "a.conllu");
  ASSERT_EQ(again.size(), trees.size());
  for (size_t i = 0; i < trees.size(); ++i) {
    EXPECT_EQ(again[i].tokens, trees[i].tokens);
    EXPECT_EQ(again[i].heads, trees[i].heads);
    EXPECT_EQ(again[i].dep_types, trees[i].dep_types);
  }
}

TEST(ConlluTest, FixtureMatchesCorpusTokens) {
  std::vector<DepTree> trees = ReadConllu(FixturePath("parses.conllu"));
  std::vector<Statement> statements = IngestCorpus(FixturePath("corpus")).statements;
  ASSERT_EQ(trees.size(), statements.size());
  for (size_t i = 0; i < trees.size(); ++i) {
    EXPECT_EQ(trees[i].statement_id, statements[i].id);
    ASSERT_EQ(trees[i].tokens.size(), statements[i].tokens.size()) << statements[i].id;
    for (size_t k = 0; k < trees[i].tokens.size(); ++k) {
      EXPECT_EQ(trees[i].tokens[k].text, statements[i].tokens[k].text);
    }
  }
}

TEST(SrlFramesTest, WorkedExampleFrame) {
  TempDir dir;
  WriteFile(dir / "f.jsonl",
            R"({"statement_id":"s","sentence_len":9,"verb_index":1,"verb_lemma":"collect",)"
            R"("arguments":[{"role":"ARG0","start":0,"end":1},{"role":"ARG1","start":2,"end":4},)"
            R"({"role":"ARGM-TMP","start":4,"end":9}]})"
            "\n");
  std::vector<SrlFrame> frames = ReadSrlFrames(dir / "f.jsonl");
  ASSERT_EQ(frames.size(), 1u);
  EXPECT_EQ(frames[0].arguments.size(), 3u);
  EXPECT_EQ(frames[0].arguments[2], (SrlArgument{"ARGM-TMP", 4, 9}));
}

TEST(SrlFramesTest, ZeroArguments) {
  TempDir dir;
  WriteFile(dir / "f.jsonl",
            R"({"statement_id":"s","sentence_len":3,"verb_index":0,"verb_lemma":"go","arguments":[]})"
            "\n");
  EXPECT_TRUE(ReadSrlFrames(dir / "f.jsonl")[0].arguments.empty());
}

TEST(SrlFramesTest, Errors) {
  TempDir dir;
  for (const char *line : {
           R"({"statement_id":"s","sentence_len":3,"verb_index":0,"verb_lemma":"go","arguments":[{"role":"ARG1","start":1,"end":4}]})",
           R"({"statement_id":"s","sentence_len":3,"verb_index":3,"verb_lemma":"go","arguments":[]})",
           R"({"statement_id":"s","sentence_len":3,"verb_index":1,"verb_lemma":"go","arguments":[{"role":"ARG1","start":0,"end":2}]})",
           R"({"statement_id":"s","sentence_len":3,"verb_index":1,"verb_lemma":"go","arguments":[{"role":"ARG1","start":2,"end":2}]})",
           R"({"statement_id":"s","sentence_len":3,"verb_index":1,"verb_lemma":"go"})",
       }) {
    WriteFile(dir / "f.jsonl", std::string(line) + "\n");
    EXPECT_THROW(ReadSrlFrames(dir / "f.jsonl"), Error) << line;
  }
}

TEST(SrlFramesTest, RandomRoundTripIsByteIdentical) {
  TempDir dir;
  std::mt19937_64 rng(5);
  std::vector<SrlFrame> frames;
  while (frames.size() < 50) {
    for (SrlFrame &f : testing::RandomFrames(rng, "s" + std::to_string(frames.size()))) {
      if (frames.size() < 50) frames.push_back(std::move(f));
    }
  }
  WriteSrlFrames(frames, dir / "a.jsonl");
  std::vector<SrlFrame> read = ReadSrlFrames(dir / "a.jsonl");
  EXPECT_EQ(read, frames);
  WriteSrlFrames(read, dir / "b.jsonl");
  EXPECT_EQ(ReadFile(dir / "a.jsonl"), ReadFile(dir / "b.jsonl"));
}

TEST(SrlFramesTest, FixtureValidatesAndGroups) {
  std::vector<SrlFrame> frames = ReadSrlFrames(FixturePath("frames.jsonl"));
  EXPECT_EQ(frames.size(), 94u);
  std::vector<std::vector<SrlFrame>> groups = GroupFramesByStatement(frames);
  EXPECT_EQ(groups.front().front().statement_id, "p1/s1/0");
  EXPECT_EQ(groups.front().size(), 3u);
  for (const auto &group : groups) {
    for (const SrlFrame &f : group) EXPECT_EQ(f.statement_id, group.front().statement_id);
  }
}

}  // namespace
}  // namespace ciex
