// include/sdr/cascade.h

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

#ifndef SDR_CASCADE_H_
#define SDR_CASCADE_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdr/transcript.h"

namespace sdr {

struct DiarSegment {
  std::string recording_id;
  std::string speaker;
  double start = 0.0;
  double end = 0.0;
  friend bool operator==(const DiarSegment &, const DiarSegment &) = default;
};

struct TimedToken {
  std::string text;
  double start = 0.0;
  double end = 0.0;
  friend bool operator==(const TimedToken &, const TimedToken &) = default;
};

struct LineError {
  std::size_t line = 0;
  std::optional<std::string> recording;  // when the line got far enough to name one
  std::string message;
};

// RTTM rows: SPEAKER <file> <chnl> <onset> <dur> <ortho> <stype> <name> <conf> [<slat>].
// Blank lines, ";;" comments and non-SPEAKER rows are skipped.
// ParseRttm throws ParseError on the first bad line; ReadRttm collects
// per-line errors and keeps going.
std::vector<DiarSegment> ParseRttm(std::string_view text);

struct RttmContents {
  std::map<std::string, std::vector<DiarSegment>> by_recording;
  std::vector<LineError> errors;
};
RttmContents ReadRttm(std::string_view text);

// CTM-like token rows: <recording> <channel> <start> <duration> <text> [<conf>].
// Tokens come back grouped per recording, stably sorted by start.
struct TokenContents {
  std::map<std::string, std::vector<TimedToken>> by_recording;
  std::vector<LineError> errors;
};
TokenContents ReadTokens(std::string_view text);
std::map<std::string, std::vector<TimedToken>> ParseTokens(std::string_view text);

// Shortest round-trip decimal representation of the times.
std::string WriteRttm(const std::vector<DiarSegment> &segments);
// Throws std::invalid_argument on tokens with whitespace or empty text.
std::string WriteTokens(const std::string &recording_id, const std::vector<TimedToken> &tokens);

// Each token goes to the segment with the largest temporal overlap (ties to
// the earlier-starting segment); tokens overlapping no segment go to the
// segment whose midpoint is nearest the token midpoint. Runs of consecutive
// same-speaker tokens become one utterance spanning the run, texts joined
// with `joiner`. Throws std::invalid_argument("no diarization available")
// when tokens exist but segments do not.
SATranscript AssignTokens(std::vector<TimedToken> tokens, std::vector<DiarSegment> segments,
                          std::string clip_id, std::string_view joiner = "");

struct CascadeFixture {
  std::vector<DiarSegment> segments;
  std::vector<TimedToken> tokens;
};

// Perfect SD+ASR outputs for a reference: one segment per utterance and one
// token per character, evenly spaced across the utterance. Throws
// std::invalid_argument on zero-duration or overlapping utterances.
CascadeFixture OracleCascade(const SATranscript &ref);

std::vector<DiarSegment> ShiftSegments(std::vector<DiarSegment> segments, double delta);

}  // namespace sdr

#endif  // SDR_CASCADE_H_
