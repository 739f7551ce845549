// include/sdr/transcript.h

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

#ifndef SDR_TRANSCRIPT_H_
#define SDR_TRANSCRIPT_H_

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sdr {

// Raised by parsers; line() is 1-based, 0 when the failure is not tied to a
// particular line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string &what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

  // Same error, message prefixed with e.g. a file name.
  ParseError WithContext(const std::string &context) const {
    return ParseError(line_, context + ": " + what(), 0);
  }

 private:
  ParseError(std::size_t line, const std::string &full, int) : std::runtime_error(full), line_(line) {}
  std::size_t line_;
};

struct Utterance {
  std::string speaker;
  std::string text;
  double start = 0.0;
  double end = 0.0;

  friend bool operator==(const Utterance &, const Utterance &) = default;
};

// Canonical utterance order: start, then end, then speaker label.
bool CanonicalLess(const Utterance &a, const Utterance &b);

// Throws std::invalid_argument naming the violated invariant.
void ValidateUtterance(const Utterance &u);

// Speaker-attributed transcript of one clip. Immutable once built; the
// constructor validates every utterance and puts them in canonical order.
class SATranscript {
 public:
  SATranscript() = default;
  SATranscript(std::string clip_id, std::vector<Utterance> utterances,
               std::optional<double> duration = std::nullopt);

  const std::string &clip_id() const { return clip_id_; }
  const std::vector<Utterance> &utterances() const { return utterances_; }
  const std::optional<double> &duration() const { return duration_; }
  bool empty() const { return utterances_.empty(); }

  std::set<std::string> speaker_set() const;

  friend bool operator==(const SATranscript &, const SATranscript &) = default;

 private:
  std::string clip_id_;
  std::vector<Utterance> utterances_;
  std::optional<double> duration_;
};

// JSONL transcript: a header record {"clip_id", "duration"?} followed by one
// {"speaker", "text", "start", "end"} record per line. Blank lines are
// ignored. Errors carry the offending line number.
SATranscript ParseTranscript(std::string_view jsonl);
std::string SerializeTranscript(const SATranscript &t);

SATranscript ReadTranscriptFile(const std::string &path);
void WriteTranscriptFile(const std::string &path, const SATranscript &t);

// Relabels speakers as "spk 0", "spk 1", ... by first appearance in
// canonical order.
SATranscript Anonymize(const SATranscript &t);

std::string AnonymousLabel(std::size_t index);

}  // namespace sdr

#endif  // SDR_TRANSCRIPT_H_
