// include/sdr/wav.h

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

#ifndef SDR_WAV_H_
#define SDR_WAV_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sdr {

constexpr int kTargetSampleRate = 16000;

// Mono audio, samples nominally in [-1, 1].
struct AudioClip {
  int sample_rate = kTargetSampleRate;
  std::vector<double> samples;

  double duration() const { return static_cast<double>(samples.size()) / sample_rate; }
  friend bool operator==(const AudioClip &, const AudioClip &) = default;
};

class WavFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// 16-bit PCM only (plain or WAVE_FORMAT_EXTENSIBLE). Multichannel input keeps
// channel 0. Other encodings are rejected by name.
AudioClip ReadWav(std::string_view bytes);
// 16-bit PCM mono, canonical 44-byte header. Samples are rounded to the
// nearest 1/32768 step and clamped.
std::string WriteWav(const AudioClip &clip);

AudioClip ReadWavFile(const std::string &path);
void WriteWavFile(const std::string &path, const AudioClip &clip);

// Windowed-sinc resampler. Low-pass cutoff at 0.95 of the lower Nyquist
// frequency, Kaiser window (beta 8.6) spanning 32 zero crossings each side,
// taps renormalized to unit DC gain per output sample. Output length is
// ceil(n * target / source). The serial variant is the reference for the
// OpenMP kernel.
AudioClip Resample(const AudioClip &clip, int target_rate);
AudioClip ResampleSerial(const AudioClip &clip, int target_rate);

struct ResamplerDesign {
  double cutoff_fraction = 0.95;
  int zero_crossings = 32;
  double kaiser_beta = 8.6;
};

}  // namespace sdr

#endif  // SDR_WAV_H_
