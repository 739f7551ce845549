// src/registration.cc

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

#include "sdr/registration.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sdr/transcript.h"

namespace sdr {

std::vector<Span> SegmentEnrollment(double total_duration, Rng &rng) {
  return SegmentEnrollment(total_duration, [&rng](double lo, double hi) { return rng.UniformReal(lo, hi); });
}

std::vector<Span> SegmentEnrollment(double total_duration, const LengthDraw &draw) {
  if (!(total_duration >= kEnrollMinClip))
    throw std::invalid_argument("enrollment audio shorter than 2 s");
  std::vector<Span> spans;
  double pos = 0.0;
  while (total_duration - pos >= kEnrollMinClip) {
    const double remaining = total_duration - pos;
    const double len = std::min(draw(kEnrollMinClip, kEnrollMaxClip), remaining);
    const double end = (len == remaining) ? total_duration : pos + len;
    spans.push_back({pos, end});
    pos = end;
  }
  const double tail = total_duration - pos;
  if (tail > 0.0 && spans.back().length() + tail <= kEnrollMaxClip) spans.back().end = total_duration;
  return spans;
}

std::vector<double> AverageEmbeddings(const std::vector<std::vector<double>> &vectors) {
  if (vectors.empty()) throw std::invalid_argument("no embeddings to average");
  const std::size_t dim = vectors.front().size();
  std::vector<double> mean(dim, 0.0);
  for (const auto &v : vectors) {
    if (v.size() != dim) throw std::invalid_argument("embedding dimension mismatch");
    for (std::size_t k = 0; k < dim; ++k) mean[k] += v[k];
  }
  for (double &x : mean) x /= static_cast<double>(vectors.size());
  return mean;
}

SpeakerProfile BuildProfile(std::string name, const std::vector<std::vector<double>> &clip_embeddings) {
  return {std::move(name), AverageEmbeddings(clip_embeddings), clip_embeddings.size()};
}

ProfilePool::ProfilePool(std::vector<SpeakerProfile> profiles) : profiles_(std::move(profiles)) {
  std::set<std::string> seen;
  for (const auto &p : profiles_) {
    if (p.name.empty()) throw std::invalid_argument("profile with empty name");
    if (!seen.insert(p.name).second) throw std::invalid_argument("duplicate profile name: " + p.name);
    if (&p == &profiles_.front()) dim_ = p.embedding.size();
    if (p.embedding.size() != dim_)
      throw std::invalid_argument("profile " + p.name + " has dimension " + std::to_string(p.embedding.size()) +
                                  ", pool dimension is " + std::to_string(dim_));
  }
}

const SpeakerProfile *ProfilePool::Find(std::string_view name) const {
  for (const auto &p : profiles_)
    if (p.name == name) return &p;
  return nullptr;
}

ProfilePool ParseProfilePool(std::string_view jsonl) {
  std::vector<SpeakerProfile> profiles;
  std::size_t line_no = 0, pos = 0;
  while (pos <= jsonl.size()) {
    std::size_t nl = jsonl.find('\n', pos);
    if (nl == std::string_view::npos) nl = jsonl.size();
    std::string_view line = jsonl.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception &e) {
      throw ParseError(line_no, std::string("malformed JSON: ") + e.what());
    }
    if (!rec.is_object() || !rec.contains("name") || !rec["name"].is_string() || !rec.contains("embedding") ||
        !rec["embedding"].is_array())
      throw ParseError(line_no, "profile record needs \"name\" and \"embedding\"");
    SpeakerProfile p;
    p.name = rec["name"].get<std::string>();
    for (const auto &x : rec["embedding"]) {
      if (!x.is_number()) throw ParseError(line_no, "non-numeric embedding component");
      p.embedding.push_back(x.get<double>());
    }
    if (rec.contains("dim")) {
      if (!rec["dim"].is_number_unsigned() || rec["dim"].get<std::size_t>() != p.embedding.size())
        throw ParseError(line_no, "\"dim\" does not match embedding length");
    }
    if (rec.contains("source_clip_count") && rec["source_clip_count"].is_number_unsigned())
      p.source_clip_count = rec["source_clip_count"].get<std::size_t>();
    profiles.push_back(std::move(p));
  }
  try {
    return ProfilePool(std::move(profiles));
  } catch (const std::invalid_argument &e) {
    throw ParseError(0, e.what());
  }
}

std::string SerializeProfilePool(const ProfilePool &pool) {
  std::string out;
  for (const auto &p : pool.profiles()) {
    nlohmann::ordered_json j;
    j["name"] = p.name;
    j["dim"] = p.embedding.size();
    j["embedding"] = p.embedding;
    out += j.dump(-1, ' ', false) + "\n";
  }
  return out;
}

RegistrationScenario BuildScenario(const std::set<std::string> &gt_speakers, const ProfilePool &pool,
                                   RegistrationMode mode, OverRegistRange range, Rng &rng) {
  RegistrationScenario s;
  s.mode = mode;
  s.n_gt = gt_speakers.size();
  if (mode == RegistrationMode::kNoRegist) return s;

  for (const auto &name : gt_speakers) {
    const SpeakerProfile *p = pool.Find(name);
    if (!p) throw std::invalid_argument("no registered profile for ground-truth speaker " + name);
    s.profiles.push_back(*p);
  }

  if (mode == RegistrationMode::kOverRegist) {
    std::vector<const SpeakerProfile *> distractors;
    for (const auto &p : pool.profiles())
      if (!gt_speakers.contains(p.name)) distractors.push_back(&p);
    const std::size_t hi = std::min(range.max, distractors.size());
    if (range.min < 1 || hi < range.min)
      throw std::invalid_argument("not enough distractor profiles for over-registration (have " +
                                  std::to_string(distractors.size()) + ", need " + std::to_string(range.min) + ")");
    s.n_ov = static_cast<std::size_t>(
        rng.UniformInt(static_cast<std::int64_t>(range.min), static_cast<std::int64_t>(hi)));
    // Partial Fisher-Yates: the first n_ov slots become a uniform sample.
    for (std::size_t k = 0; k < s.n_ov; ++k) {
      auto j = static_cast<std::size_t>(
          rng.UniformInt(static_cast<std::int64_t>(k), static_cast<std::int64_t>(distractors.size()) - 1));
      std::swap(distractors[k], distractors[j]);
      s.profiles.push_back(*distractors[k]);
    }
  }
  rng.Shuffle(std::span<SpeakerProfile>(s.profiles));
  return s;
}

Verdict VerifyScenario(const RegistrationScenario &s, const std::set<std::string> &gt_speakers) {
  auto fail = [](std::string clause) { return Verdict{false, std::move(clause)}; };
  std::set<std::string> names;
  for (const auto &p : s.profiles) {
    if (!names.insert(p.name).second) return fail("distinct profile names");
  }
  if (s.n_gt != gt_speakers.size()) return fail("n_gt = |ground truth|");
  switch (s.mode) {
    case RegistrationMode::kNoRegist:
      if (!s.profiles.empty()) return fail("profiles empty");
      if (s.n_ov != 0) return fail("n_ov = 0");
      break;
    case RegistrationMode::kMatchRegist:
      if (s.n_ov != 0) return fail("n_ov = 0");
      if (names != gt_speakers) return fail("name set equality");
      if (s.profiles.size() != s.n_gt) return fail("|profiles| = n_gt");
      break;
    case RegistrationMode::kOverRegist:
      if (s.n_ov < 1) return fail("n_ov ≥ 1");
      if (s.profiles.size() != s.n_gt + s.n_ov) return fail("|profiles| = n_gt + n_ov");
      if (!std::includes(names.begin(), names.end(), gt_speakers.begin(), gt_speakers.end()))
        return fail("ground truth ⊂ profile names");
      break;
  }
  return {};
}

nlohmann::ordered_json ScenarioJson(const RegistrationScenario &s) {
  nlohmann::ordered_json j;
  j["mode"] = ModeName(s.mode);
  j["n_gt"] = s.n_gt;
  j["n_ov"] = s.n_ov;
  auto order = nlohmann::ordered_json::array();
  for (const auto &p : s.profiles) order.push_back(p.name);
  j["order"] = std::move(order);
  return j;
}

}  // namespace sdr
