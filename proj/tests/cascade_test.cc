// tests/cascade_test.cc

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

#include "sdr/cascade.h"
#include "sdr/metrics.h"
#include "testing.h"

using sdr::DiarSegment;
using sdr::SATranscript;
using sdr::TimedToken;

namespace {

const sdr::NormalizationPolicy kDefault = sdr::NormalizationPolicy::ScoringDefault();

std::string SpeakerOf(const TimedToken &token, const std::vector<DiarSegment> &segments) {
  auto t = sdr::AssignTokens({token}, segments, "r");
  REQUIRE(t.utterances().size() == 1);
  return t.utterances()[0].speaker;
}

}  // namespace

TEST_CASE("parse rttm") {
  auto segs = sdr::ParseRttm(
      ";; comment line\n"
      "SPEAKER m 1 10.50 3.20 <NA> <NA> spk1 <NA> <NA>\n"
      "SPKR-INFO m 1 <NA> <NA> <NA> unknown spk1 <NA> <NA>\n"
      "\n"
      "SPEAKER m 1 0 1 <NA> <NA> 张三 <NA>\n");
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].recording_id == "m");
  CHECK(segs[0].speaker == "spk1");
  CHECK(segs[0].start == 10.50);
  CHECK(segs[0].end == doctest::Approx(13.70).epsilon(1e-12));
  CHECK(segs[1].speaker == "张三");

  auto line_of = [](const std::string &text) -> std::size_t {
    try {
      sdr::ParseRttm(text);
    } catch (const sdr::ParseError &e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("SPEAKER m 1 0 1 <NA> <NA> a <NA>\nSPEAKER m 1 0.0 -1.0 <NA> <NA> spk1 <NA> <NA>\n") == 2);
  CHECK(line_of("SPEAKER m 1 abc 1.0 <NA> <NA> spk1 <NA> <NA>\n") == 1);
  CHECK(line_of("SPEAKER m 1 1.0 1.0 <NA> <NA>\n") == 1);
  CHECK(line_of("SPEAKER m 1 1.0 0 <NA> <NA> s <NA>\n") == 1);
}

TEST_CASE("lenient rttm reader collects errors per recording") {
  auto c = sdr::ReadRttm(
      "SPEAKER a 1 0 1 <NA> <NA> x <NA> <NA>\n"
      "SPEAKER b 1 0 oops <NA> <NA> y <NA> <NA>\n"
      "SPEAKER b 1 2 1 <NA> <NA> y <NA> <NA>\n");
  CHECK(c.by_recording.at("a").size() == 1);
  REQUIRE(c.errors.size() == 1);
  CHECK(c.errors[0].line == 2);
  CHECK(c.errors[0].recording == "b");
}

TEST_CASE("rttm and token writers round trip") {
  std::vector<DiarSegment> segs = {{"m", "A", 0.25, 1.5}, {"m", "B", 1.5, 2.0 / 3.0 + 1.5}};
  CHECK(sdr::ParseRttm(sdr::WriteRttm(segs)).size() == 2);
  auto back = sdr::ParseRttm(sdr::WriteRttm(segs));
  CHECK(back[0] == segs[0]);
  CHECK(back[1].start == segs[1].start);
  CHECK(back[1].end == doctest::Approx(segs[1].end).epsilon(1e-15));

  std::vector<TimedToken> toks = {{"你", 0.5, 0.75}, {"好", 0.75, 1.0}};
  auto parsed = sdr::ParseTokens(sdr::WriteTokens("m", toks));
  CHECK(parsed.at("m") == toks);
  CHECK_THROWS_AS(sdr::WriteTokens("m", {{"a b", 0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(sdr::ParseTokens("m 1 x 1 a\n"), sdr::ParseError);
}

TEST_CASE("tokens read sorted, optional confidence column ignored") {
  auto t = sdr::ReadTokens("r 1 2.0 0.5 乙 0.9\nr 1 1.0 0.5 甲\n;; note\n");
  CHECK(t.errors.empty());
  REQUIRE(t.by_recording.at("r").size() == 2);
  CHECK(t.by_recording.at("r")[0].text == "甲");
}

TEST_CASE("token assignment rules") {
  std::vector<DiarSegment> ab = {{"r", "A", 0, 2}, {"r", "B", 2, 4}};
  CHECK(SpeakerOf({"x", 1.0, 1.5}, ab) == "A");
  CHECK(SpeakerOf({"x", 1.9, 2.3}, ab) == "B");
  CHECK(SpeakerOf({"x", 1.8, 2.2}, ab) == "A");  // equal overlap: earlier segment
  CHECK(SpeakerOf({"x", 5.0, 5.2}, ab) == "B");  // nearest midpoint
  CHECK(SpeakerOf({"x", 0.0, 0.5}, {{"r", "A", 1, 2}, {"r", "B", 3, 4}}) == "A");
  CHECK_THROWS_WITH_AS(sdr::AssignTokens({{"x", 0, 1}}, {}, "r"), "no diarization available", std::invalid_argument);
  CHECK(sdr::AssignTokens({}, {}, "r").empty());
}

TEST_CASE("merging and token conservation") {
  std::vector<DiarSegment> segs = {{"r", "A", 0, 2}, {"r", "B", 2, 4}, {"r", "A", 4, 6}};
  std::vector<TimedToken> toks = {{"一", 0.1, 0.5}, {"二", 0.6, 1.0}, {"三", 2.1, 2.5},
                                  {"四", 4.1, 4.4}, {"五", 4.5, 5.0}};
  auto t = sdr::AssignTokens(toks, segs, "r", "");
  REQUIRE(t.utterances().size() == 3);
  CHECK(t.utterances()[0] == sdr::Utterance{"A", "一二", 0.1, 1.0});
  CHECK(t.utterances()[1] == sdr::Utterance{"B", "三", 2.1, 2.5});
  CHECK(t.utterances()[2] == sdr::Utterance{"A", "四五", 4.1, 5.0});
  CHECK(sdr::AssignTokens(toks, segs, "r", " ").utterances()[0].text == "一 二");

  std::string all;
  for (const auto &u : t.utterances()) all += u.text;
  CHECK(all == "一二三四五");
}

TEST_CASE("oracle cascade") {
  SATranscript one("c", {{"A", "你好", 0, 2}});
  auto fx = sdr::OracleCascade(one);
  CHECK(fx.segments == std::vector<DiarSegment>{{"c", "A", 0, 2}});
  CHECK(fx.tokens == std::vector<TimedToken>{{"你", 0, 1}, {"好", 1, 2}});

  SATranscript adjacent("c", {{"A", "你好", 0, 1}, {"A", "再见", 1, 2}, {"B", "早", 2.5, 3}});
  auto fx2 = sdr::OracleCascade(adjacent);
  auto hyp = sdr::AssignTokens(fx2.tokens, fx2.segments, "c");
  CHECK(hyp.utterances().size() == 2);
  CHECK(sdr::CpCer(adjacent, hyp, kDefault).rate == 0.0);

  CHECK_THROWS_AS(sdr::OracleCascade(SATranscript("z", {{"A", "x", 1, 1}})), std::invalid_argument);
  CHECK_THROWS_AS(sdr::OracleCascade(SATranscript("o", {{"A", "x", 0, 2}, {"B", "y", 1, 3}})),
                  std::invalid_argument);
}

TEST_CASE("oracle round trip over random references is exact") {
  sdr::Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    auto ref = testing::RandomTranscript(rng, "r" + std::to_string(trial), {"A", "B", "C", "D"}, 20, true);
    auto fx = sdr::OracleCascade(ref);
    auto hyp = sdr::AssignTokens(fx.tokens, fx.segments, ref.clip_id());
    CHECK(sdr::CpCer(ref, hyp, kDefault).counts.distance() == 0);
    CHECK(sdr::ComputeCer(ref, hyp, kDefault).counts.distance() == 0);
    // Deterministic.
    CHECK(sdr::AssignTokens(fx.tokens, fx.segments, ref.clip_id()) == hyp);
  }
}

TEST_CASE("shift segments") {
  auto shifted = sdr::ShiftSegments({{"r", "A", 1, 2}}, 0.5);
  CHECK(shifted[0].start == 1.5);
  CHECK(shifted[0].end == 2.5);
}
