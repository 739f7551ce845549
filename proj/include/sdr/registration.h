// include/sdr/registration.h

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

#ifndef SDR_REGISTRATION_H_
#define SDR_REGISTRATION_H_

#include <functional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sdr/metrics.h"
#include "sdr/random.h"

namespace sdr {

struct Span {
  double start = 0.0;
  double end = 0.0;
  double length() const { return end - start; }
  friend bool operator==(const Span &, const Span &) = default;
};

// Cuts enrollment audio into 2-10 s clips from the start. Each span length is
// drawn uniformly from [2, 10] s (clipped to what remains). A tail shorter
// than 2 s is merged into the last span when the merged span stays within
// 10 s and dropped otherwise. Throws std::invalid_argument when
// total_duration < 2.
std::vector<Span> SegmentEnrollment(double total_duration, Rng &rng);

// Draws a span length on [lo, hi]. Lets callers replay a fixed draw sequence.
using LengthDraw = std::function<double(double lo, double hi)>;
std::vector<Span> SegmentEnrollment(double total_duration, const LengthDraw &draw);

constexpr double kEnrollMinClip = 2.0;
constexpr double kEnrollMaxClip = 10.0;

// Component-wise arithmetic mean. Throws std::invalid_argument on an empty
// list or mismatched dimensions.
std::vector<double> AverageEmbeddings(const std::vector<std::vector<double>> &vectors);

struct SpeakerProfile {
  std::string name;
  std::vector<double> embedding;
  std::size_t source_clip_count = 1;
};

SpeakerProfile BuildProfile(std::string name, const std::vector<std::vector<double>> &clip_embeddings);

// Profiles keyed by display name; names are unique and all embeddings share
// one dimension.
class ProfilePool {
 public:
  ProfilePool() = default;
  // Throws std::invalid_argument on duplicate names or mixed dimensions.
  explicit ProfilePool(std::vector<SpeakerProfile> profiles);

  const std::vector<SpeakerProfile> &profiles() const { return profiles_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return profiles_.size(); }
  const SpeakerProfile *Find(std::string_view name) const;

 private:
  std::vector<SpeakerProfile> profiles_;
  std::size_t dim_ = 0;
};

// JSONL: {"name": str, "dim": int, "embedding": [float]} per line.
ProfilePool ParseProfilePool(std::string_view jsonl);
std::string SerializeProfilePool(const ProfilePool &pool);

struct RegistrationScenario {
  RegistrationMode mode = RegistrationMode::kNoRegist;
  std::vector<SpeakerProfile> profiles;
  std::size_t n_gt = 0;
  std::size_t n_ov = 0;

  std::size_t n_registered() const { return profiles.size(); }
};

struct OverRegistRange {
  std::size_t min = 1;
  std::size_t max = 50;
};

// No-Regist: nothing registered. Match-Regist: exactly the ground-truth
// speakers, uniformly shuffled. Over-Regist: ground truth plus n_ov
// distractors drawn uniformly without replacement from the rest of the pool,
// n_ov uniform on [range.min, min(range.max, available)], whole list shuffled.
// Throws std::invalid_argument when a ground-truth profile is missing or the
// pool has too few distractors.
RegistrationScenario BuildScenario(const std::set<std::string> &gt_speakers, const ProfilePool &pool,
                                   RegistrationMode mode, OverRegistRange range, Rng &rng);

struct Verdict {
  bool pass = true;
  std::string clause;  // the violated constraint when !pass
  explicit operator bool() const { return pass; }
};

Verdict VerifyScenario(const RegistrationScenario &s, const std::set<std::string> &gt_speakers);

// {"mode", "n_gt", "n_ov", "order": [names]}
nlohmann::ordered_json ScenarioJson(const RegistrationScenario &s);

}  // namespace sdr

#endif  // SDR_REGISTRATION_H_
