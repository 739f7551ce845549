// src/simulate.cc

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

#include "sdr/simulate.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <stdexcept>

#include <fftw3.h>

namespace sdr {

namespace {

std::string ResolvePath(const std::string &path, const std::string &base_dir) {
  if (base_dir.empty() || path.empty() || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(base_dir) / path).lexically_normal().string();
}

template <typename Fn>
void ForEachNonBlankLine(std::string_view text, Fn &&fn) {
  std::size_t line_no = 0, pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    ++line_no;
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    if (!line.empty()) fn(line_no, line);
  }
}

std::int64_t ToSamples(double seconds) { return std::llround(seconds * kTargetSampleRate); }

AudioClip At16k(AudioClip clip) {
  if (clip.sample_rate != kTargetSampleRate) clip = Resample(clip, kTargetSampleRate);
  return clip;
}

}  // namespace

CorpusIndex::CorpusIndex(std::vector<SourceUtterance> utterances) {
  for (auto &u : utterances) {
    if (u.speaker.empty()) throw std::invalid_argument("source utterance without speaker");
    if (!(u.duration > 0.0)) throw std::invalid_argument("source utterance with non-positive duration");
    total_duration_ += u.duration;
    by_speaker_[u.speaker].push_back(std::move(u));
  }
  for (const auto &[name, list] : by_speaker_) speakers_.push_back(name);
}

const std::vector<SourceUtterance> &CorpusIndex::utterances_of(const std::string &speaker) const {
  return by_speaker_.at(speaker);
}

CorpusIndex CorpusIndex::FromManifest(std::string_view jsonl, const std::string &base_dir) {
  std::vector<SourceUtterance> list;
  ForEachNonBlankLine(jsonl, [&](std::size_t line_no, std::string_view line) {
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception &e) {
      throw ParseError(line_no, std::string("malformed JSON: ") + e.what());
    }
    auto str = [&](const char *key) {
      if (!rec.contains(key) || !rec[key].is_string())
        throw ParseError(line_no, std::string("missing string field \"") + key + "\"");
      return rec[key].get<std::string>();
    };
    SourceUtterance u;
    u.speaker = str("speaker");
    u.audio = ResolvePath(str("wav"), base_dir);
    u.text = str("text");
    if (!rec.contains("duration") || !rec["duration"].is_number())
      throw ParseError(line_no, "missing numeric field \"duration\"");
    u.duration = rec["duration"].get<double>();
    if (!(u.duration > 0.0)) throw ParseError(line_no, "non-positive duration");
    list.push_back(std::move(u));
  });
  return CorpusIndex(std::move(list));
}

std::vector<std::string> ParsePathManifest(std::string_view text, const std::string &base_dir) {
  std::vector<std::string> out;
  ForEachNonBlankLine(text, [&](std::size_t line_no, std::string_view line) {
    if (line.front() == '{') {
      nlohmann::json rec;
      try {
        rec = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception &e) {
        throw ParseError(line_no, std::string("malformed JSON: ") + e.what());
      }
      if (!rec.contains("wav") || !rec["wav"].is_string()) throw ParseError(line_no, "missing \"wav\" path");
      out.push_back(ResolvePath(rec["wav"].get<std::string>(), base_dir));
    } else {
      out.push_back(ResolvePath(std::string(line), base_dir));
    }
  });
  return out;
}

void MixtureSpec::Validate() const {
  if (n_speakers < kMinSpeakers || n_speakers > kMaxSpeakers)
    throw std::invalid_argument("n_speakers must be in [2, 4]");
  if (!(snr_db >= kMinSnrDb && snr_db <= kMaxSnrDb)) throw std::invalid_argument("snr_db must be in [10, 20]");
  if (!(target_duration > 0.0)) throw std::invalid_argument("target_duration must be positive");
  std::set<std::string> names;
  for (const auto &u : source_utterances) {
    if (!(u.duration > 0.0)) throw std::invalid_argument("source utterance with non-positive duration");
    names.insert(u.speaker);
  }
  if (names.size() != static_cast<std::size_t>(n_speakers))
    throw std::invalid_argument("source utterances must come from exactly n_speakers distinct speakers");
  for (const auto &[speaker, ref] : rir_refs)
    if (!names.contains(speaker)) throw std::invalid_argument("RIR given for unknown speaker " + speaker);
}

nlohmann::ordered_json MixtureSpecJson(const MixtureSpec &spec) {
  nlohmann::ordered_json j;
  j["clip_id"] = spec.clip_id;
  j["seed"] = spec.seed;
  j["n_speakers"] = spec.n_speakers;
  j["target_duration"] = spec.target_duration;
  j["snr_db"] = spec.snr_db;
  auto sources = nlohmann::ordered_json::array();
  for (const auto &u : spec.source_utterances) {
    nlohmann::ordered_json s;
    s["speaker"] = u.speaker;
    s["wav"] = u.audio;
    s["text"] = u.text;
    s["duration"] = u.duration;
    sources.push_back(std::move(s));
  }
  j["source_utterances"] = std::move(sources);
  j["noise"] = spec.noise_ref ? nlohmann::ordered_json(*spec.noise_ref) : nlohmann::ordered_json(nullptr);
  nlohmann::ordered_json rirs = nlohmann::ordered_json::object();
  for (const auto &[speaker, ref] : spec.rir_refs) rirs[speaker] = ref;
  j["rirs"] = std::move(rirs);
  return j;
}

MixtureSpec SampleMixtureSpec(const CorpusIndex &corpus, std::uint64_t seed,
                              const std::vector<std::string> &noise_refs,
                              const std::vector<std::string> &rir_refs, std::string clip_id) {
  if (corpus.speakers().size() < static_cast<std::size_t>(kMaxSpeakers))
    throw std::invalid_argument("insufficient corpus: need at least 4 speakers, have " +
                                std::to_string(corpus.speakers().size()));
  if (corpus.total_duration() < kMixtureDuration)
    throw std::invalid_argument("insufficient corpus: less than 50 s of audio");

  Rng rng(seed);
  MixtureSpec spec;
  spec.clip_id = std::move(clip_id);
  spec.seed = seed;
  spec.n_speakers = static_cast<int>(rng.UniformInt(kMinSpeakers, kMaxSpeakers));
  spec.snr_db = rng.UniformReal(kMinSnrDb, kMaxSnrDb);

  std::vector<std::string> speakers = corpus.speakers();
  rng.Shuffle(std::span<std::string>(speakers));
  speakers.resize(static_cast<std::size_t>(spec.n_speakers));

  std::vector<std::vector<SourceUtterance>> queues;
  for (const auto &s : speakers) {
    auto list = corpus.utterances_of(s);
    rng.Shuffle(std::span<SourceUtterance>(list));
    queues.push_back(std::move(list));
  }
  // Round-robin; the first round always runs so every drawn speaker is
  // represented.
  double queued = 0.0;
  std::vector<std::size_t> cursor(queues.size(), 0);
  for (std::size_t round = 0;; ++round) {
    bool took_any = false;
    for (std::size_t k = 0; k < queues.size(); ++k) {
      if (round > 0 && queued >= spec.target_duration) break;
      if (cursor[k] >= queues[k].size()) continue;
      spec.source_utterances.push_back(queues[k][cursor[k]++]);
      queued += spec.source_utterances.back().duration;
      took_any = true;
    }
    if (!took_any || queued >= spec.target_duration) break;
  }

  if (!noise_refs.empty())
    spec.noise_ref = noise_refs[static_cast<std::size_t>(
        rng.UniformInt(0, static_cast<std::int64_t>(noise_refs.size()) - 1))];
  if (!rir_refs.empty()) {
    for (const auto &s : speakers) {
      spec.rir_refs[s] =
          rir_refs[static_cast<std::size_t>(rng.UniformInt(0, static_cast<std::int64_t>(rir_refs.size()) - 1))];
    }
  }
  return spec;
}

std::vector<Turn> ScheduleTurns(const MixtureSpec &spec, Rng &rng) {
  spec.Validate();
  // Queues keep the order utterances appear in the spec.
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::size_t>> queues;
  for (std::size_t i = 0; i < spec.source_utterances.size(); ++i) {
    const auto &name = spec.source_utterances[i].speaker;
    if (!queues.contains(name)) order.push_back(name);
    queues[name].push_back(i);
  }
  std::map<std::string, std::size_t> head;

  const std::int64_t limit = ToSamples(spec.target_duration);
  std::int64_t cursor = 0;
  std::optional<std::string> previous;
  std::vector<Turn> turns;
  while (true) {
    std::vector<const std::string *> candidates, fresh;
    for (const auto &name : order) {
      if (head[name] < queues[name].size()) {
        candidates.push_back(&name);
        if (!previous || name != *previous) fresh.push_back(&name);
      }
    }
    if (candidates.empty()) break;
    const auto &pool = fresh.empty() ? candidates : fresh;
    const std::string &speaker =
        *pool[static_cast<std::size_t>(rng.UniformInt(0, static_cast<std::int64_t>(pool.size()) - 1))];
    const std::size_t idx = queues[speaker][head[speaker]++];
    const SourceUtterance &u = spec.source_utterances[idx];
    const std::int64_t len = ToSamples(u.duration);
    if (len <= 0 || cursor + len > limit) continue;
    turns.push_back({speaker, u.text, idx, cursor, cursor + len});
    cursor += len;
    previous = speaker;
  }
  return turns;
}

double MeanPower(const std::vector<double> &x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

double NoiseGainForSnr(double signal_power, double noise_power, double snr_db) {
  if (!(signal_power > 0.0)) throw std::domain_error("silent signal: SNR undefined");
  if (!(noise_power > 0.0)) throw std::domain_error("silent noise: SNR undefined");
  return std::sqrt(signal_power / (noise_power * std::pow(10.0, snr_db / 10.0)));
}

std::vector<double> LoopToLength(const std::vector<double> &noise, std::size_t length, std::size_t crossfade) {
  if (noise.empty()) throw std::invalid_argument("cannot loop empty noise");
  if (noise.size() >= length) return {noise.begin(), noise.begin() + static_cast<std::ptrdiff_t>(length)};
  if (noise.size() <= 2 * crossfade) crossfade = 0;
  std::vector<double> out(noise);
  out.reserve(length + noise.size());
  while (out.size() < length) {
    const std::size_t seam = out.size() - crossfade;
    for (std::size_t k = 0; k < crossfade; ++k) {
      const double w = (static_cast<double>(k) + 0.5) / static_cast<double>(crossfade);
      out[seam + k] = out[seam + k] * (1.0 - w) + noise[k] * w;
    }
    out.insert(out.end(), noise.begin() + static_cast<std::ptrdiff_t>(crossfade), noise.end());
  }
  out.resize(length);
  return out;
}

AudioClip ScaleNoiseToSnr(const AudioClip &signal, const AudioClip &noise, double snr_db) {
  if (signal.sample_rate != kTargetSampleRate || noise.sample_rate != kTargetSampleRate)
    throw std::invalid_argument("signal and noise must be 16 kHz");
  AudioClip out;
  out.sample_rate = kTargetSampleRate;
  if (noise.samples.empty()) throw std::domain_error("silent noise: SNR undefined");
  out.samples = LoopToLength(noise.samples, signal.samples.size());
  const double g = NoiseGainForSnr(MeanPower(signal.samples), MeanPower(out.samples), snr_db);
  for (double &v : out.samples) v *= g;
  return out;
}

std::vector<double> Convolve(const std::vector<double> &x, const std::vector<double> &h) {
  if (x.empty() || h.empty()) return std::vector<double>(x.size(), 0.0);
  std::size_t n = 1;
  while (n < x.size() + h.size() - 1) n <<= 1;
  const std::size_t bins = n / 2 + 1;

  double *a = fftw_alloc_real(n);
  double *b = fftw_alloc_real(n);
  fftw_complex *fa = fftw_alloc_complex(bins);
  fftw_complex *fb = fftw_alloc_complex(bins);
  fftw_plan pa, pb, inv;
  // Planning touches FFTW's global state; FFTW_ESTIMATE keeps plans (and
  // therefore rounding) identical from run to run.
#pragma omp critical(sdr_fftw_plan)
  {
    pa = fftw_plan_dft_r2c_1d(static_cast<int>(n), a, fa, FFTW_ESTIMATE);
    pb = fftw_plan_dft_r2c_1d(static_cast<int>(n), b, fb, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(static_cast<int>(n), fa, a, FFTW_ESTIMATE);
  }
  std::fill(a, a + n, 0.0);
  std::fill(b, b + n, 0.0);
  std::copy(x.begin(), x.end(), a);
  std::copy(h.begin(), h.end(), b);
  fftw_execute(pa);
  fftw_execute(pb);
  for (std::size_t k = 0; k < bins; ++k) {
    const double re = fa[k][0] * fb[k][0] - fa[k][1] * fb[k][1];
    const double im = fa[k][0] * fb[k][1] + fa[k][1] * fb[k][0];
    fa[k][0] = re;
    fa[k][1] = im;
  }
  fftw_execute(inv);
  std::vector<double> y(a, a + x.size());
  for (double &v : y) v /= static_cast<double>(n);
#pragma omp critical(sdr_fftw_plan)
  {
    fftw_destroy_plan(pa);
    fftw_destroy_plan(pb);
    fftw_destroy_plan(inv);
  }
  fftw_free(a);
  fftw_free(b);
  fftw_free(fa);
  fftw_free(fb);
  return y;
}

MixtureResult SynthesizeMixture(const MixtureSpec &spec, const AudioResolver &resolver) {
  spec.Validate();
  MixtureResult result;
  Rng schedule_rng(DeriveSeed(spec.seed, 1));
  result.turns = ScheduleTurns(spec, schedule_rng);

  const auto total = static_cast<std::size_t>(ToSamples(spec.target_duration));
  result.speech.samples.assign(total, 0.0);

  std::map<std::string, std::vector<double>> rirs;
  for (const auto &[speaker, ref] : spec.rir_refs) rirs[speaker] = At16k(resolver(ref)).samples;

  std::vector<Utterance> utterances;
  for (const Turn &turn : result.turns) {
    const SourceUtterance &src = spec.source_utterances[turn.source_index];
    AudioClip clip = At16k(resolver(src.audio));
    const std::int64_t scheduled = turn.end_sample - turn.start_sample;
    const auto actual = static_cast<std::int64_t>(clip.samples.size());
    if (std::llabs(actual - scheduled) > kTargetSampleRate / 100)
      throw std::invalid_argument("audio length of " + src.audio + " (" + std::to_string(actual) +
                                  " samples) disagrees with manifest duration (" + std::to_string(scheduled) + ")");
    if (auto it = rirs.find(turn.speaker); it != rirs.end()) clip.samples = Convolve(clip.samples, it->second);
    const std::int64_t copy = std::min(actual, scheduled);
    for (std::int64_t k = 0; k < copy; ++k)
      result.speech.samples[static_cast<std::size_t>(turn.start_sample + k)] += clip.samples[static_cast<std::size_t>(k)];
    utterances.push_back({turn.speaker, turn.text, turn.start(), turn.end()});
  }

  result.noise.samples.assign(total, 0.0);
  if (spec.noise_ref) {
    AudioClip noise = At16k(resolver(*spec.noise_ref));
    if (!noise.samples.empty()) {
      std::vector<double> looped = LoopToLength(noise.samples, total);
      if (MeanPower(looped) > 0.0) {
        const double g = NoiseGainForSnr(MeanPower(result.speech.samples), MeanPower(looped), spec.snr_db);
        for (std::size_t k = 0; k < total; ++k) result.noise.samples[k] = g * looped[k];
        result.noise_added = true;
      }
    }
  }

  result.mixture.samples.resize(total);
  double peak = 0.0;
  for (std::size_t k = 0; k < total; ++k) {
    result.mixture.samples[k] = result.speech.samples[k] + result.noise.samples[k];
    peak = std::max(peak, std::abs(result.mixture.samples[k]));
  }
  if (peak > 1.0) {
    result.peak_scale = kPeakTarget / peak;
    for (auto *buf : {&result.mixture.samples, &result.speech.samples, &result.noise.samples})
      for (double &v : *buf) v *= result.peak_scale;
  }
  result.transcript = SATranscript(spec.clip_id, std::move(utterances), spec.target_duration);
  return result;
}

std::vector<Span> SplitClips(double recording_duration, Rng &rng) {
  return SplitClips(recording_duration, [&rng](double lo, double hi) { return rng.UniformReal(lo, hi); });
}

std::vector<Span> SplitClips(double recording_duration, const LengthDraw &draw) {
  if (!(recording_duration >= kMinEvalClip)) throw std::invalid_argument("recording shorter than 40 s");
  std::vector<Span> spans;
  double pos = 0.0;
  while (true) {
    const double remaining = recording_duration - pos;
    const double len = draw(kMinEvalClip, kMaxEvalClip);
    if (len >= remaining || remaining - len < kMinEvalClip) {
      spans.push_back({pos, recording_duration});
      break;
    }
    spans.push_back({pos, pos + len});
    pos += len;
  }
  return spans;
}

}  // namespace sdr
