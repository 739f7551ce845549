// include/sdr/simulate.h

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

#ifndef SDR_SIMULATE_H_
#define SDR_SIMULATE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sdr/random.h"
#include "sdr/registration.h"
#include "sdr/transcript.h"
#include "sdr/wav.h"

namespace sdr {

constexpr double kMixtureDuration = 50.0;
constexpr int kMinSpeakers = 2;
constexpr int kMaxSpeakers = 4;
constexpr double kMinSnrDb = 10.0;
constexpr double kMaxSnrDb = 20.0;
constexpr double kPeakTarget = 0.95;
constexpr std::size_t kNoiseCrossfade = 160;  // 10 ms at 16 kHz

struct SourceUtterance {
  std::string speaker;
  std::string audio;  // reference handed to the resolver (a path for the CLI)
  std::string text;
  double duration = 0.0;
  friend bool operator==(const SourceUtterance &, const SourceUtterance &) = default;
};

// Source corpus: manifest JSONL of {"speaker", "wav", "text", "duration"}.
class CorpusIndex {
 public:
  CorpusIndex() = default;
  explicit CorpusIndex(std::vector<SourceUtterance> utterances);

  // Relative "wav" paths are resolved against base_dir when it is non-empty.
  static CorpusIndex FromManifest(std::string_view jsonl, const std::string &base_dir = "");

  const std::vector<std::string> &speakers() const { return speakers_; }  // sorted
  const std::vector<SourceUtterance> &utterances_of(const std::string &speaker) const;
  double total_duration() const { return total_duration_; }

 private:
  std::vector<std::string> speakers_;
  std::map<std::string, std::vector<SourceUtterance>> by_speaker_;
  double total_duration_ = 0.0;
};

// Noise / RIR manifests: one path per line, or {"wav": path} records.
std::vector<std::string> ParsePathManifest(std::string_view text, const std::string &base_dir = "");

struct MixtureSpec {
  std::string clip_id;
  std::uint64_t seed = 0;
  int n_speakers = 2;
  double target_duration = kMixtureDuration;
  double snr_db = 15.0;
  std::vector<SourceUtterance> source_utterances;
  std::optional<std::string> noise_ref;
  std::map<std::string, std::string> rir_refs;  // speaker -> RIR reference

  // Throws std::invalid_argument naming the violated constraint.
  void Validate() const;
};

nlohmann::ordered_json MixtureSpecJson(const MixtureSpec &spec);

// n_speakers uniform on {2,3,4}, snr_db uniform on [10, 20], speakers drawn
// without replacement, then utterances taken round-robin from each speaker's
// shuffled list until 50 s of content is queued. Pure function of the inputs
// and seed. Throws std::invalid_argument when the corpus has fewer than four
// speakers or less than 50 s of audio.
MixtureSpec SampleMixtureSpec(const CorpusIndex &corpus, std::uint64_t seed,
                              const std::vector<std::string> &noise_refs = {},
                              const std::vector<std::string> &rir_refs = {}, std::string clip_id = "");

struct Turn {
  std::string speaker;
  std::string text;
  std::size_t source_index = 0;  // into spec.source_utterances
  std::int64_t start_sample = 0;
  std::int64_t end_sample = 0;
  double start() const { return static_cast<double>(start_sample) / kTargetSampleRate; }
  double end() const { return static_cast<double>(end_sample) / kTargetSampleRate; }
};

// Sequential, non-overlapping placement on the 16 kHz sample grid. The next
// speaker is drawn uniformly among speakers with queued utterances, excluding
// the previous speaker whenever another one is available. Utterances that
// would run past target_duration are skipped, so the schedule never exceeds
// it.
std::vector<Turn> ScheduleTurns(const MixtureSpec &spec, Rng &rng);

// Mean squared amplitude.
double MeanPower(const std::vector<double> &x);

// Gain g with P_s / (g^2 P_n) = 10^(snr_db / 10). Throws std::domain_error
// when either power is zero.
double NoiseGainForSnr(double signal_power, double noise_power, double snr_db);

// Repeats noise (10 ms linear crossfade at each seam) or trims it to `length`.
std::vector<double> LoopToLength(const std::vector<double> &noise, std::size_t length,
                                 std::size_t crossfade = kNoiseCrossfade);

// Noise looped/trimmed to the signal's length and scaled to the target SNR,
// both powers measured over the signal's span.
AudioClip ScaleNoiseToSnr(const AudioClip &signal, const AudioClip &noise, double snr_db);

// Linear convolution truncated to the length of x (FFT based).
std::vector<double> Convolve(const std::vector<double> &x, const std::vector<double> &h);

using AudioResolver = std::function<AudioClip(const std::string &ref)>;

struct MixtureResult {
  AudioClip mixture;
  SATranscript transcript;
  AudioClip speech;  // summed speech after any peak scaling
  AudioClip noise;   // scaled noise after any peak scaling; zeros when skipped
  double peak_scale = 1.0;
  bool noise_added = false;
  std::vector<Turn> turns;
};

// Places speech per ScheduleTurns (RNG stream derived from spec.seed),
// applies optional per-speaker RIRs, adds noise at spec.snr_db measured over
// the whole clip, and peak-normalizes to 0.95 when any sample exceeds 1.
// Silent noise is skipped. Throws std::invalid_argument when the resolved
// audio length disagrees with the spec by more than 10 ms, and
// std::domain_error when the placed speech is silent while noise is present.
MixtureResult SynthesizeMixture(const MixtureSpec &spec, const AudioResolver &resolver);

// Splits a long recording into consecutive 40-50 s clips; a final remainder
// shorter than 40 s is merged into the last clip. Throws
// std::invalid_argument when recording_duration < 40.
std::vector<Span> SplitClips(double recording_duration, Rng &rng);
std::vector<Span> SplitClips(double recording_duration, const LengthDraw &draw);

constexpr double kMinEvalClip = 40.0;
constexpr double kMaxEvalClip = 50.0;

}  // namespace sdr

#endif  // SDR_SIMULATE_H_
