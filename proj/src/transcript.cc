// src/transcript.cc

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

#include "sdr/transcript.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "sdr/unicode.h"

namespace sdr {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

bool HasControlCharacter(std::string_view s) {
  for (char32_t c : DecodeUtf8(s)) {
    if (c < 0x20 || (c >= 0x7f && c <= 0x9f)) return true;
  }
  return false;
}

std::string RequireString(const json &record, const char *key, std::size_t line) {
  auto it = record.find(key);
  if (it == record.end()) throw ParseError(line, std::string("missing required field \"") + key + "\"");
  if (!it->is_string()) throw ParseError(line, std::string("field \"") + key + "\" must be a string");
  return it->get<std::string>();
}

double RequireNumber(const json &record, const char *key, std::size_t line) {
  auto it = record.find(key);
  if (it == record.end()) throw ParseError(line, std::string("missing required field \"") + key + "\"");
  if (!it->is_number()) throw ParseError(line, std::string("field \"") + key + "\" must be a number");
  double v = it->get<double>();
  if (!std::isfinite(v)) throw ParseError(line, std::string("field \"") + key + "\" is not finite");
  return v;
}

}  // namespace

bool CanonicalLess(const Utterance &a, const Utterance &b) {
  if (a.start != b.start) return a.start < b.start;
  if (a.end != b.end) return a.end < b.end;
  return a.speaker < b.speaker;
}

void ValidateUtterance(const Utterance &u) {
  if (!std::isfinite(u.start) || !std::isfinite(u.end))
    throw std::invalid_argument("utterance times must be finite");
  if (u.start < 0.0) throw std::invalid_argument("negative start time");
  if (u.end < u.start) throw std::invalid_argument("end < start (negative duration)");
  if (u.speaker.empty()) throw std::invalid_argument("empty speaker label");
  if (!IsValidUtf8(u.speaker) || !IsValidUtf8(u.text))
    throw std::invalid_argument("malformed UTF-8");
  if (HasControlCharacter(u.speaker))
    throw std::invalid_argument("speaker label contains a control character");
}

SATranscript::SATranscript(std::string clip_id, std::vector<Utterance> utterances,
                           std::optional<double> duration)
    : clip_id_(std::move(clip_id)), utterances_(std::move(utterances)), duration_(duration) {
  if (duration_ && (!std::isfinite(*duration_) || *duration_ < 0.0))
    throw std::invalid_argument("negative duration");
  for (const auto &u : utterances_) ValidateUtterance(u);
  std::stable_sort(utterances_.begin(), utterances_.end(), CanonicalLess);
}

std::set<std::string> SATranscript::speaker_set() const {
  std::set<std::string> out;
  for (const auto &u : utterances_) out.insert(u.speaker);
  return out;
}

SATranscript ParseTranscript(std::string_view jsonl) {
  std::optional<std::string> clip_id;
  std::optional<double> duration;
  std::vector<Utterance> utterances;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= jsonl.size()) {
    std::size_t nl = jsonl.find('\n', pos);
    if (nl == std::string_view::npos) nl = jsonl.size();
    std::string_view line = jsonl.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception &e) {
      throw ParseError(line_no, std::string("malformed JSON: ") + e.what());
    }
    if (!record.is_object()) throw ParseError(line_no, "record is not a JSON object");

    if (!clip_id) {
      clip_id = RequireString(record, "clip_id", line_no);
      auto it = record.find("duration");
      if (it != record.end() && !it->is_null()) {
        if (!it->is_number()) throw ParseError(line_no, "field \"duration\" must be a number");
        duration = it->get<double>();
        if (!std::isfinite(*duration) || *duration < 0.0) throw ParseError(line_no, "negative duration");
      }
      continue;
    }

    Utterance u;
    u.speaker = RequireString(record, "speaker", line_no);
    u.text = RequireString(record, "text", line_no);
    u.start = RequireNumber(record, "start", line_no);
    u.end = RequireNumber(record, "end", line_no);
    try {
      ValidateUtterance(u);
    } catch (const std::invalid_argument &e) {
      throw ParseError(line_no, e.what());
    }
    utterances.push_back(std::move(u));
  }
  if (!clip_id) throw ParseError(0, "missing header record with \"clip_id\"");
  return SATranscript(std::move(*clip_id), std::move(utterances), duration);
}

std::string SerializeTranscript(const SATranscript &t) {
  std::string out;
  ordered_json header;
  header["clip_id"] = t.clip_id();
  if (t.duration()) header["duration"] = *t.duration();
  out += header.dump(-1, ' ', false);
  out += '\n';
  for (const auto &u : t.utterances()) {
    ordered_json record;
    record["speaker"] = u.speaker;
    record["text"] = u.text;
    record["start"] = u.start;
    record["end"] = u.end;
    out += record.dump(-1, ' ', false);
    out += '\n';
  }
  return out;
}

SATranscript ReadTranscriptFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return ParseTranscript(ss.str());
  } catch (const ParseError &e) {
    throw e.WithContext(path);
  }
}

void WriteTranscriptFile(const std::string &path, const SATranscript &t) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << SerializeTranscript(t);
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string AnonymousLabel(std::size_t index) { return "spk " + std::to_string(index); }

SATranscript Anonymize(const SATranscript &t) {
  std::map<std::string, std::size_t> index;
  std::vector<Utterance> relabeled = t.utterances();
  for (auto &u : relabeled) {
    auto [it, inserted] = index.try_emplace(u.speaker, index.size());
    u.speaker = AnonymousLabel(it->second);
  }
  return SATranscript(t.clip_id(), std::move(relabeled), t.duration());
}

}  // namespace sdr
