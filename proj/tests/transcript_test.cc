// tests/transcript_test.cc

// Copyright 2026  The sdr authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "doctest.h"

#include "sdr/transcript.h"
#include "testing.h"

using sdr::SATranscript;
using sdr::Utterance;

TEST_CASE("parse a single record") {
  auto t = sdr::ParseTranscript(
      "{\"clip_id\": \"c1\"}\n"
      "{\"speaker\": \"spk 0\", \"text\": \"你好\", \"start\": 0.0, \"end\": 1.2}\n");
  CHECK(t.clip_id() == "c1");
  REQUIRE(t.utterances().size() == 1);
  CHECK(t.utterances()[0] == Utterance{"spk 0", "你好", 0.0, 1.2});
  CHECK_FALSE(t.duration().has_value());
}

TEST_CASE("records are sorted by start, end, speaker") {
  auto t = sdr::ParseTranscript(
      "{\"clip_id\": \"c\", \"duration\": 9.5}\n"
      "{\"speaker\": \"B\", \"text\": \"x\", \"start\": 3.0, \"end\": 4.0}\n"
      "{\"speaker\": \"B\", \"text\": \"y\", \"start\": 1.0, \"end\": 2.0}\n"
      "{\"speaker\": \"A\", \"text\": \"z\", \"start\": 1.0, \"end\": 2.0}\n"
      "{\"speaker\": \"A\", \"text\": \"w\", \"start\": 1.0, \"end\": 1.5}\n");
  std::vector<std::string> texts;
  for (const auto &u : t.utterances()) texts.push_back(u.text);
  CHECK(texts == std::vector<std::string>{"w", "z", "y", "x"});
  CHECK(t.duration() == 9.5);
}

TEST_CASE("parse errors carry line numbers") {
  auto line_of = [](const std::string &text) -> std::size_t {
    try {
      sdr::ParseTranscript(text);
    } catch (const sdr::ParseError &e) {
      return e.line();
    }
    return 0;
  };
  const std::string header = "{\"clip_id\": \"c\"}\n";
  CHECK(line_of(header + "{\"speaker\": \"A\", \"text\": \"x\", \"start\": 2.0, \"end\": 1.0}\n") == 2);
  CHECK(line_of(header + "{\"speaker\": \"A\", \"text\": \"x\", \"start\": 0.0, \"end\": 1.0}\n{oops\n") == 3);
  CHECK(line_of(header + "{\"speaker\": \"A\", \"start\": 0.0, \"end\": 1.0}\n") == 2);
  CHECK(line_of(header + "{\"speaker\": \"\", \"text\": \"x\", \"start\": 0.0, \"end\": 1.0}\n") == 2);
  CHECK(line_of(header + "{\"speaker\": \"A\\u0007\", \"text\": \"x\", \"start\": 0.0, \"end\": 1.0}\n") == 2);
  CHECK(line_of("{\"clip_id\": \"c\", \"duration\": -1}\n") == 1);
  CHECK(line_of("{\"duration\": 3}\n") == 1);
  CHECK_THROWS_AS(sdr::ParseTranscript(""), sdr::ParseError);
}

TEST_CASE("serialize shapes") {
  SATranscript empty("e", {});
  CHECK(sdr::SerializeTranscript(empty) == "{\"clip_id\":\"e\"}\n");
  SATranscript one("o", {{"spk 0", "你好", 0.0, 1.25}}, 2.0);
  const std::string s = sdr::SerializeTranscript(one);
  CHECK(std::count(s.begin(), s.end(), '\n') == 2);
  CHECK(s.find("你好") != std::string::npos);
  CHECK(sdr::ParseTranscript(s) == one);
}

TEST_CASE("round trip of random transcripts") {
  sdr::Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto t = testing::RandomTranscript(rng, "clip/" + std::to_string(trial), {"张三", "Bob", "spk 2", "a\"b"}, 100);
    CHECK(sdr::ParseTranscript(sdr::SerializeTranscript(t)) == t);
  }
  // Values that are not on a millisecond grid survive too.
  SATranscript odd("x", {{"A", "t", 0.1 + 0.2, 1.0 / 3.0}}, 50.0);
  CHECK(sdr::ParseTranscript(sdr::SerializeTranscript(odd)) == odd);
}

TEST_CASE("file round trip reports the file on errors") {
  testing::TempDir dir("transcript");
  SATranscript t("f", {{"A", "好", 0.5, 1.0}});
  sdr::WriteTranscriptFile(dir / "f.jsonl", t);
  CHECK(sdr::ReadTranscriptFile(dir / "f.jsonl") == t);
  testing::Spit(dir / "bad.jsonl", "{\"clip_id\": \"b\"}\n{\"speaker\": 1}\n");
  try {
    sdr::ReadTranscriptFile(dir / "bad.jsonl");
    FAIL("expected a parse error");
  } catch (const sdr::ParseError &e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("bad.jsonl") != std::string::npos);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("anonymize by first appearance") {
  SATranscript t("c", {{"Alice", "a", 0, 1}, {"Bob", "b", 1, 2}, {"Alice", "c", 2, 3}});
  auto a = sdr::Anonymize(t);
  std::vector<std::string> labels;
  for (const auto &u : a.utterances()) labels.push_back(u.speaker);
  CHECK(labels == std::vector<std::string>{"spk 0", "spk 1", "spk 0"});

  SATranscript already("c", {{"spk 1", "a", 0, 1}, {"spk 0", "b", 1, 2}});
  labels.clear();
  const auto relabeled = sdr::Anonymize(already);
  for (const auto &u : relabeled.utterances()) labels.push_back(u.speaker);
  CHECK(labels == std::vector<std::string>{"spk 0", "spk 1"});

  SATranscript solo("c", {{"X", "a", 0, 1}, {"X", "b", 4, 5}});
  const auto single = sdr::Anonymize(solo);
  for (const auto &u : single.utterances()) CHECK(u.speaker == "spk 0");
}

TEST_CASE("anonymize is idempotent and preserves the speaker partition") {
  sdr::Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto t = testing::RandomTranscript(rng, "c", {"A", "B", "C", "D"}, 30);
    auto a = sdr::Anonymize(t);
    CHECK(sdr::Anonymize(a) == a);
    REQUIRE(a.utterances().size() == t.utterances().size());
    std::map<std::string, std::string> forward, backward;
    for (std::size_t i = 0; i < t.utterances().size(); ++i) {
      const auto &u = t.utterances()[i];
      const auto &v = a.utterances()[i];
      CHECK(u.text == v.text);
      CHECK(u.start == v.start);
      CHECK(u.end == v.end);
      auto [f, fnew] = forward.emplace(u.speaker, v.speaker);
      auto [b, bnew] = backward.emplace(v.speaker, u.speaker);
      CHECK(f->second == v.speaker);
      CHECK(b->second == u.speaker);
    }
    CHECK(a.speaker_set().size() == t.speaker_set().size());
  }
}
