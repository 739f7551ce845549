// src/wav.cc

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

#include "sdr/wav.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

namespace sdr {

namespace {

std::uint32_t Le32(const unsigned char *p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t Le16(const unsigned char *p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }

void Put32(std::string &out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}
void Put16(std::string &out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

std::string FormatName(std::uint16_t tag) {
  switch (tag) {
    case 0x0002: return "MS ADPCM";
    case 0x0003: return "IEEE float";
    case 0x0006: return "A-law";
    case 0x0007: return "mu-law";
    case 0x0011: return "IMA ADPCM";
    case 0x0055: return "MPEG Layer 3";
    default: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "format tag 0x%04x", tag);
      return buf;
    }
  }
}

const ResamplerDesign kDesign;

// Polyphase tables: with g = gcd(source, target), output sample n sits at
// input position n * M / L (M = source / g, L = target / g), so only L
// fractional phases exist.
class Polyphase {
 public:
  Polyphase(int source_rate, int target_rate) {
    const int g = std::gcd(source_rate, target_rate);
    up_ = target_rate / g;
    down_ = source_rate / g;
    const double fc = 0.5 * std::min(1.0, static_cast<double>(target_rate) / source_rate) * kDesign.cutoff_fraction;
    const double half_width = kDesign.zero_crossings / (2.0 * fc);
    const double inv_i0_beta = 1.0 / std::cyl_bessel_i(0.0, kDesign.kaiser_beta);
    first_tap_.resize(static_cast<std::size_t>(up_));
    taps_.resize(static_cast<std::size_t>(up_));
    for (std::int64_t phase = 0; phase < up_; ++phase) {
      const double frac = static_cast<double>(phase) / static_cast<double>(up_);
      const auto lo = static_cast<std::int64_t>(std::ceil(frac - half_width));
      const auto hi = static_cast<std::int64_t>(std::floor(frac + half_width));
      first_tap_[phase] = lo;
      auto &w = taps_[phase];
      for (std::int64_t j = lo; j <= hi; ++j) {
        const double d = frac - static_cast<double>(j);
        const double r = d / half_width;
        const double win =
            std::cyl_bessel_i(0.0, kDesign.kaiser_beta * std::sqrt(std::max(0.0, 1.0 - r * r))) * inv_i0_beta;
        const double arg = 2.0 * fc * d;
        const double sinc = (arg == 0.0) ? 1.0 : std::sin(M_PI * arg) / (M_PI * arg);
        w.push_back(win * sinc);
      }
    }
  }

  double At(const std::vector<double> &x, std::int64_t n) const {
    const std::int64_t pos = n * down_;
    const std::int64_t base = pos / up_;
    const std::int64_t phase = pos % up_;
    const auto &w = taps_[static_cast<std::size_t>(phase)];
    const std::int64_t first = base + first_tap_[static_cast<std::size_t>(phase)];
    const auto size = static_cast<std::int64_t>(x.size());
    double acc = 0.0, wsum = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      const std::int64_t i = first + static_cast<std::int64_t>(k);
      if (i < 0 || i >= size) continue;
      acc += w[k] * x[static_cast<std::size_t>(i)];
      wsum += w[k];
    }
    return wsum != 0.0 ? acc / wsum : 0.0;
  }

 private:
  std::int64_t up_ = 1, down_ = 1;
  std::vector<std::int64_t> first_tap_;
  std::vector<std::vector<double>> taps_;
};

std::int64_t OutputLength(std::size_t n, int source_rate, int target_rate) {
  const auto num = static_cast<std::int64_t>(n) * target_rate;
  return (num + source_rate - 1) / source_rate;
}

void CheckRates(const AudioClip &clip, int target_rate) {
  if (clip.sample_rate <= 0 || target_rate <= 0) throw std::invalid_argument("sample rates must be positive");
}

}  // namespace

AudioClip ReadWav(std::string_view bytes) {
  const auto *p = reinterpret_cast<const unsigned char *>(bytes.data());
  const std::size_t size = bytes.size();
  if (size < 12) throw WavFormatError("truncated header");
  if (std::memcmp(p, "RIFF", 4) != 0 || std::memcmp(p + 8, "WAVE", 4) != 0)
    throw WavFormatError("not a RIFF/WAVE file");

  bool have_fmt = false;
  std::uint16_t channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= size) {
    const unsigned char *chunk = p + pos;
    const std::uint32_t chunk_size = Le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (chunk_size < 16 || body + chunk_size > size) throw WavFormatError("truncated header (fmt chunk)");
      std::uint16_t tag = Le16(p + body);
      channels = Le16(p + body + 2);
      rate = Le32(p + body + 4);
      bits = Le16(p + body + 14);
      if (tag == 0xFFFE) {
        if (chunk_size < 40) throw WavFormatError("truncated header (extensible fmt chunk)");
        tag = Le16(p + body + 24);
      }
      if (tag != 0x0001) throw WavFormatError("unsupported WAV encoding: " + FormatName(tag));
      if (bits != 16) throw WavFormatError("unsupported WAV encoding: PCM " + std::to_string(bits) + "-bit");
      if (channels == 0 || rate == 0) throw WavFormatError("invalid fmt chunk");
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) throw WavFormatError("data chunk before fmt chunk");
      if (body + chunk_size > size) throw WavFormatError("truncated data chunk");
      const std::size_t frame = 2u * channels;
      const std::size_t frames = chunk_size / frame;
      AudioClip clip;
      clip.sample_rate = static_cast<int>(rate);
      clip.samples.resize(frames);
      for (std::size_t i = 0; i < frames; ++i) {
        const auto v = static_cast<std::int16_t>(Le16(p + body + i * frame));
        clip.samples[i] = v / 32768.0;
      }
      return clip;
    }
    pos = body + chunk_size + (chunk_size & 1u);
  }
  throw WavFormatError(have_fmt ? "missing data chunk" : "truncated header (no fmt chunk)");
}

std::string WriteWav(const AudioClip &clip) {
  const auto data_bytes = static_cast<std::uint32_t>(clip.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  Put32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  Put32(out, 16);
  Put16(out, 1);
  Put16(out, 1);
  Put32(out, static_cast<std::uint32_t>(clip.sample_rate));
  Put32(out, static_cast<std::uint32_t>(clip.sample_rate) * 2);
  Put16(out, 2);
  Put16(out, 16);
  out += "data";
  Put32(out, data_bytes);
  for (double x : clip.samples) {
    const double scaled = std::nearbyint(x * 32768.0);
    const auto v = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
    Put16(out, static_cast<std::uint16_t>(v));
  }
  return out;
}

AudioClip ReadWavFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return ReadWav(ss.str());
  } catch (const WavFormatError &e) {
    throw WavFormatError(path + ": " + e.what());
  }
}

void WriteWavFile(const std::string &path, const AudioClip &clip) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << WriteWav(clip);
  if (!out) throw std::runtime_error("write failed: " + path);
}

AudioClip Resample(const AudioClip &clip, int target_rate) {
  CheckRates(clip, target_rate);
  if (clip.sample_rate == target_rate) return clip;
  const Polyphase filter(clip.sample_rate, target_rate);
  const std::int64_t n_out = OutputLength(clip.samples.size(), clip.sample_rate, target_rate);
  AudioClip out;
  out.sample_rate = target_rate;
  out.samples.resize(static_cast<std::size_t>(n_out));
#pragma omp parallel for schedule(static)
  for (std::int64_t n = 0; n < n_out; ++n) out.samples[static_cast<std::size_t>(n)] = filter.At(clip.samples, n);
  return out;
}

AudioClip ResampleSerial(const AudioClip &clip, int target_rate) {
  CheckRates(clip, target_rate);
  if (clip.sample_rate == target_rate) return clip;
  const Polyphase filter(clip.sample_rate, target_rate);
  const std::int64_t n_out = OutputLength(clip.samples.size(), clip.sample_rate, target_rate);
  AudioClip out;
  out.sample_rate = target_rate;
  out.samples.reserve(static_cast<std::size_t>(n_out));
  for (std::int64_t n = 0; n < n_out; ++n) out.samples.push_back(filter.At(clip.samples, n));
  return out;
}

}  // namespace sdr
