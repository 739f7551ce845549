// bench/bench_kernels.cc

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

// Serial vs OpenMP kernels, and the traceback DP vs the bit-parallel
// distance.

#include <cmath>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "sdr/metrics.h"
#include "sdr/random.h"
#include "sdr/textdist.h"
#include "sdr/transcript.h"
#include "sdr/unicode.h"
#include "sdr/wav.h"

namespace {

using namespace sdr;

UnitSeq RandomUnits(Rng &rng, std::size_t n) {
  UnitSeq s(n, U' ');
  for (auto &c : s) c = static_cast<char32_t>(0x4E00 + rng.UniformInt(0, 199));
  return s;
}

SpeakerConcat RandomConcat(Rng &rng, int speakers, std::size_t len) {
  SpeakerConcat c;
  for (int i = 0; i < speakers; ++i) c["s" + std::to_string(i)] = RandomUnits(rng, len);
  return c;
}

void BM_AssignmentCostsSerial(benchmark::State &state) {
  Rng rng(1);
  auto ref = RandomConcat(rng, 4, state.range(0)), hyp = RandomConcat(rng, 4, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(AssignmentCostsSerial(ref, hyp));
}
void BM_AssignmentCostsParallel(benchmark::State &state) {
  Rng rng(1);
  auto ref = RandomConcat(rng, 4, state.range(0)), hyp = RandomConcat(rng, 4, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(AssignmentCosts(ref, hyp));
}
BENCHMARK(BM_AssignmentCostsSerial)->Arg(500)->Arg(3000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AssignmentCostsParallel)->Arg(500)->Arg(3000)->Unit(benchmark::kMillisecond);

std::vector<ClipPair> RandomPairs(int n) {
  Rng rng(2);
  std::vector<ClipPair> pairs;
  for (int i = 0; i < n; ++i) {
    std::vector<Utterance> ref, hyp;
    for (int u = 0; u < 20; ++u) {
      const std::string spk = "s" + std::to_string(u % 3);
      ref.push_back({spk, EncodeUtf8(RandomUnits(rng, 30)), u * 2.0, u * 2.0 + 1.5});
      hyp.push_back({spk, EncodeUtf8(RandomUnits(rng, 30)), u * 2.0, u * 2.0 + 1.5});
    }
    const std::string id = "c" + std::to_string(i);
    pairs.push_back({SATranscript(id, ref), SATranscript(id, hyp)});
  }
  return pairs;
}

void BM_ScoreCorpusSerial(benchmark::State &state) {
  auto pairs = RandomPairs(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        ScoreCorpusSerial(pairs, NormalizationPolicy::ScoringDefault(), RegistrationMode::kMatchRegist));
}
void BM_ScoreCorpusParallel(benchmark::State &state) {
  auto pairs = RandomPairs(static_cast<int>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        ScoreCorpus(pairs, NormalizationPolicy::ScoringDefault(), RegistrationMode::kMatchRegist, 0));
}
BENCHMARK(BM_ScoreCorpusSerial)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScoreCorpusParallel)->Arg(32)->Unit(benchmark::kMillisecond);

AudioClip Tone(int rate, double seconds) {
  AudioClip clip{rate, std::vector<double>(static_cast<std::size_t>(rate * seconds))};
  for (std::size_t i = 0; i < clip.samples.size(); ++i) clip.samples[i] = 0.5 * std::sin(2 * M_PI * 440.0 * i / rate);
  return clip;
}

void BM_ResampleSerial(benchmark::State &state) {
  auto clip = Tone(48000, 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(ResampleSerial(clip, kTargetSampleRate));
}
void BM_ResampleParallel(benchmark::State &state) {
  auto clip = Tone(48000, 10.0);
  for (auto _ : state) benchmark::DoNotOptimize(Resample(clip, kTargetSampleRate));
}
BENCHMARK(BM_ResampleSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResampleParallel)->Unit(benchmark::kMillisecond);

void BM_EditDistanceTraceback(benchmark::State &state) {
  Rng rng(3);
  auto a = RandomUnits(rng, state.range(0)), b = RandomUnits(rng, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(EditDistance(a, b));
}
void BM_LevenshteinBitParallel(benchmark::State &state) {
  Rng rng(3);
  auto a = RandomUnits(rng, state.range(0)), b = RandomUnits(rng, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Levenshtein(a, b));
}
BENCHMARK(BM_EditDistanceTraceback)->Arg(100)->Arg(2000);
BENCHMARK(BM_LevenshteinBitParallel)->Arg(100)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
