// src/cascade.cc

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

#include "sdr/cascade.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "sdr/unicode.h"

namespace sdr {

namespace {

constexpr double kOverlapTieEps = 1e-9;

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

std::optional<double> ParseNumber(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string FormatTime(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename Fn>
void ForEachLine(std::string_view text, Fn &&fn) {
  std::size_t line_no = 0, pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    ++line_no;
    fn(line_no, text.substr(pos, nl - pos));
    pos = nl + 1;
  }
}

bool SkippableLine(const std::vector<std::string_view> &fields) {
  return fields.empty() || fields.front().starts_with(";;");
}

// Returns the segment or fills `error`.
std::optional<DiarSegment> RttmRow(const std::vector<std::string_view> &f, std::string &error) {
  if (f.size() < 9) {
    error = "RTTM row needs at least 9 fields, got " + std::to_string(f.size());
    return std::nullopt;
  }
  auto onset = ParseNumber(f[3]);
  auto dur = ParseNumber(f[4]);
  if (!onset) {
    error = "malformed onset \"" + std::string(f[3]) + "\"";
    return std::nullopt;
  }
  if (!dur) {
    error = "malformed duration \"" + std::string(f[4]) + "\"";
    return std::nullopt;
  }
  if (*dur < 0.0) {
    error = "negative duration";
    return std::nullopt;
  }
  if (*dur == 0.0) {
    error = "zero-length segment";
    return std::nullopt;
  }
  if (*onset < 0.0) {
    error = "negative onset";
    return std::nullopt;
  }
  return DiarSegment{std::string(f[1]), std::string(f[7]), *onset, *onset + *dur};
}

std::optional<TimedToken> TokenRow(const std::vector<std::string_view> &f, std::string &error) {
  if (f.size() < 5) {
    error = "token row needs at least 5 fields, got " + std::to_string(f.size());
    return std::nullopt;
  }
  auto start = ParseNumber(f[2]);
  auto dur = ParseNumber(f[3]);
  if (!start || !dur) {
    error = "malformed start/duration";
    return std::nullopt;
  }
  if (*dur < 0.0) {
    error = "negative duration";
    return std::nullopt;
  }
  if (*start < 0.0) {
    error = "negative start";
    return std::nullopt;
  }
  return TimedToken{std::string(f[4]), *start, *start + *dur};
}

double Overlap(const TimedToken &t, const DiarSegment &s) {
  return std::min(t.end, s.end) - std::max(t.start, s.start);
}

}  // namespace

std::vector<DiarSegment> ParseRttm(std::string_view text) {
  std::vector<DiarSegment> out;
  ForEachLine(text, [&out](std::size_t line_no, std::string_view line) {
    auto f = SplitFields(line);
    if (SkippableLine(f) || f.front() != "SPEAKER") return;
    std::string error;
    auto seg = RttmRow(f, error);
    if (!seg) throw ParseError(line_no, error);
    out.push_back(std::move(*seg));
  });
  return out;
}

RttmContents ReadRttm(std::string_view text) {
  RttmContents out;
  ForEachLine(text, [&out](std::size_t line_no, std::string_view line) {
    auto f = SplitFields(line);
    if (SkippableLine(f) || f.front() != "SPEAKER") return;
    std::string error;
    auto seg = RttmRow(f, error);
    if (!seg) {
      std::optional<std::string> rec;
      if (f.size() > 1) rec = std::string(f[1]);
      out.errors.push_back({line_no, rec, error});
      return;
    }
    out.by_recording[seg->recording_id].push_back(std::move(*seg));
  });
  return out;
}

TokenContents ReadTokens(std::string_view text) {
  TokenContents out;
  ForEachLine(text, [&out](std::size_t line_no, std::string_view line) {
    auto f = SplitFields(line);
    if (SkippableLine(f)) return;
    std::string error;
    auto tok = TokenRow(f, error);
    if (!tok) {
      out.errors.push_back({line_no, std::string(f[0]), error});
      return;
    }
    out.by_recording[std::string(f[0])].push_back(std::move(*tok));
  });
  for (auto &[rec, tokens] : out.by_recording) {
    std::stable_sort(tokens.begin(), tokens.end(),
                     [](const TimedToken &a, const TimedToken &b) { return a.start < b.start; });
  }
  return out;
}

std::map<std::string, std::vector<TimedToken>> ParseTokens(std::string_view text) {
  TokenContents c = ReadTokens(text);
  if (!c.errors.empty()) throw ParseError(c.errors.front().line, c.errors.front().message);
  return std::move(c.by_recording);
}

std::string WriteRttm(const std::vector<DiarSegment> &segments) {
  std::string out;
  for (const auto &s : segments) {
    out += "SPEAKER " + s.recording_id + " 1 " + FormatTime(s.start) + " " + FormatTime(s.end - s.start) +
           " <NA> <NA> " + s.speaker + " <NA> <NA>\n";
  }
  return out;
}

std::string WriteTokens(const std::string &recording_id, const std::vector<TimedToken> &tokens) {
  std::string out;
  for (const auto &t : tokens) {
    if (t.text.empty() || t.text.find_first_of(" \t\r\n") != std::string::npos)
      throw std::invalid_argument("token text cannot be empty or contain whitespace");
    out += recording_id + " 1 " + FormatTime(t.start) + " " + FormatTime(t.end - t.start) + " " + t.text + "\n";
  }
  return out;
}

SATranscript AssignTokens(std::vector<TimedToken> tokens, std::vector<DiarSegment> segments, std::string clip_id,
                          std::string_view joiner) {
  if (tokens.empty()) return SATranscript(std::move(clip_id), {});
  if (segments.empty()) throw std::invalid_argument("no diarization available");

  std::stable_sort(tokens.begin(), tokens.end(),
                   [](const TimedToken &a, const TimedToken &b) { return a.start < b.start; });
  std::stable_sort(segments.begin(), segments.end(), [](const DiarSegment &a, const DiarSegment &b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.end != b.end) return a.end < b.end;
    return a.speaker < b.speaker;
  });

  auto owner = [&segments](const TimedToken &t) -> const DiarSegment & {
    std::size_t best = 0;
    double best_overlap = Overlap(t, segments[0]);
    for (std::size_t k = 1; k < segments.size(); ++k) {
      const double ov = Overlap(t, segments[k]);
      if (ov > best_overlap + kOverlapTieEps) {
        best = k;
        best_overlap = ov;
      }
    }
    if (best_overlap > 0.0) return segments[best];

    const double mid = 0.5 * (t.start + t.end);
    best = 0;
    double best_dist = std::abs(mid - 0.5 * (segments[0].start + segments[0].end));
    for (std::size_t k = 1; k < segments.size(); ++k) {
      const double d = std::abs(mid - 0.5 * (segments[k].start + segments[k].end));
      if (d < best_dist - kOverlapTieEps) {
        best = k;
        best_dist = d;
      }
    }
    return segments[best];
  };

  std::vector<Utterance> utterances;
  for (const auto &t : tokens) {
    const std::string &speaker = owner(t).speaker;
    if (!utterances.empty() && utterances.back().speaker == speaker) {
      Utterance &u = utterances.back();
      u.text.append(joiner);
      u.text += t.text;
      u.end = std::max(u.end, t.end);
    } else {
      utterances.push_back({speaker, t.text, t.start, t.end});
    }
  }
  return SATranscript(std::move(clip_id), std::move(utterances));
}

CascadeFixture OracleCascade(const SATranscript &ref) {
  CascadeFixture fx;
  double covered = 0.0;
  for (const auto &u : ref.utterances()) {
    if (!(u.end > u.start)) throw std::invalid_argument("zero-duration utterance at " + FormatTime(u.start));
    if (u.start < covered) throw std::invalid_argument("overlapping utterances at " + FormatTime(u.start));
    covered = u.end;
    fx.segments.push_back({ref.clip_id(), u.speaker, u.start, u.end});

    const std::u32string chars = DecodeUtf8(u.text);
    const std::size_t n = chars.size();
    const double step = (u.end - u.start) / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double s = u.start + step * static_cast<double>(k);
      const double e = (k + 1 == n) ? u.end : u.start + step * static_cast<double>(k + 1);
      fx.tokens.push_back({EncodeUtf8(std::u32string_view(&chars[k], 1)), s, e});
    }
  }
  return fx;
}

std::vector<DiarSegment> ShiftSegments(std::vector<DiarSegment> segments, double delta) {
  for (auto &s : segments) {
    s.start += delta;
    s.end += delta;
  }
  return segments;
}

}  // namespace sdr
