// tests/acceptance_test.cc

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

// Acceptance suite. One PASS/FAIL line per criterion; exit status is the
// number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>

#include "oracles.h"
#include "sdr/cascade.h"
#include "sdr/commands.h"
#include "sdr/metrics.h"
#include "sdr/registration.h"
#include "sdr/simulate.h"
#include "sdr/textdist.h"
#include "sdr/wav.h"
#include "testing.h"

namespace {

using Clock = std::chrono::steady_clock;

// Tolerances and budgets.
constexpr double kAssignmentBudgetS = 10.0;
constexpr double kInvarianceBudgetS = 30.0;
constexpr double kEditDistanceBudgetS = 20.0;
constexpr double kSimulationBudgetS = 120.0;
constexpr double kTableDeltaTol = 0.005;
constexpr double kSnrTolDb = 0.05;
constexpr std::size_t kClipSamples = 800000;

const sdr::NormalizationPolicy kDefault = sdr::NormalizationPolicy::ScoringDefault();

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void Report(const std::string &name, const std::function<Outcome()> &criterion) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = criterion();
  } catch (const std::exception &e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s  %-34s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
  std::fflush(stdout);
}

double Since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string Fmt(const char *format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

sdr::SATranscript Relabel(const sdr::SATranscript &t, const std::map<std::string, std::string> &sigma) {
  auto utts = t.utterances();
  for (auto &u : utts) u.speaker = sigma.at(u.speaker);
  return sdr::SATranscript(t.clip_id(), utts);
}

Outcome AssignmentOptimality() {
  const auto t0 = Clock::now();
  sdr::Rng rng(20240101);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = static_cast<std::size_t>(rng.UniformInt(2, 6));
    const std::int64_t hi = trial % 3 == 0 ? 3 : 100;
    std::vector<std::vector<std::int64_t>> rows(n, std::vector<std::int64_t>(n));
    sdr::CostMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) m(r, c) = rows[r][c] = rng.UniformInt(0, hi);
    if (sdr::SolveAssignment(m).total_cost != oracle::ExhaustiveAssignment(rows)) ++mismatches;
  }
  const double secs = Since(t0);
  return {mismatches == 0 && secs < kAssignmentBudgetS,
          Fmt("1000 matrices (2-6), %d mismatches, %.2f s < %.0f s", mismatches, secs, kAssignmentBudgetS)};
}

Outcome CpCerInvariance() {
  const auto t0 = Clock::now();
  sdr::Rng rng(77);
  const std::vector<std::string> names = {"A", "B", "C", "D", "E"};
  int violations = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::string> ref_names(names.begin(), names.begin() + rng.UniformInt(1, 5));
    std::vector<std::string> hyp_names(names.begin(), names.begin() + rng.UniformInt(1, 5));
    auto ref = testing::RandomTranscript(rng, "c", ref_names, static_cast<std::size_t>(rng.UniformInt(1, 25)));
    auto hyp = testing::RandomTranscript(rng, "c", hyp_names, static_cast<std::size_t>(rng.UniformInt(0, 25)));
    std::vector<std::string> image = hyp_names;
    for (auto &s : image) s = "h" + s + std::to_string(trial);
    rng.Shuffle(std::span<std::string>(image));
    std::map<std::string, std::string> sigma;
    for (std::size_t i = 0; i < hyp_names.size(); ++i) sigma[hyp_names[i]] = image[i];
    auto a = sdr::CpCer(ref, hyp, kDefault);
    auto b = sdr::CpCer(ref, Relabel(hyp, sigma), kDefault);
    if (a.rate != b.rate || a.assignment.total_cost != b.assignment.total_cost) ++violations;
  }
  const double secs = Since(t0);
  return {violations == 0 && secs < kInvarianceBudgetS,
          Fmt("500 relabeled pairs, %d changed, %.2f s < %.0f s", violations, secs, kInvarianceBudgetS)};
}

Outcome Dominance() {
  sdr::Rng rng(31337);
  int violations = 0, checked = 0;
  while (checked < 1000) {
    const auto k = rng.UniformInt(1, 5);
    std::vector<std::string> names;
    for (int i = 0; i < k; ++i) names.push_back("spk" + std::to_string(i));
    auto ref = testing::RandomTranscript(rng, "c", names, 20);
    auto hyp = testing::RandomTranscript(rng, "c", names, 20);
    if (ref.speaker_set() != hyp.speaker_set()) continue;
    ++checked;
    // Same denominator, so comparing edit totals compares the rationals.
    auto cp = sdr::CpCer(ref, hyp, kDefault).counts;
    auto sa = sdr::SaCer(ref, hyp, kDefault).counts;
    if (cp.reference_length != sa.reference_length || cp.distance() > sa.distance()) ++violations;
  }
  return {violations == 0, Fmt("1000 equal-name-set pairs, %d with cpCER > saCER", violations)};
}

struct TableRow {
  const char *system;
  const char *set;
  double cer, score, delta;
  bool sa;
};

// Published No-Regist (cpCER, Δcp) and registration (saCER, Δsa) rows.
const TableRow kTableRows[] = {
    {"3D-Speaker+Para", "AliMeeting", 21.30, 24.94, 3.64, false},
    {"3D-Speaker+Para", "AISHELL4", 23.02, 26.01, 2.99, false},
    {"3D-Speaker+Para", "AISHELL5", 60.16, 64.12, 3.96, false},
    {"Pyannote+Para", "AliMeeting", 21.30, 24.45, 3.15, false},
    {"Pyannote+Para", "AISHELL4", 23.02, 28.22, 5.20, false},
    {"Pyannote+Para", "AISHELL5", 60.16, 68.37, 8.21, false},
    {"DiariZen-base+Para", "AliMeeting", 21.30, 23.97, 2.67, false},
    {"DiariZen-base+Para", "AISHELL4", 23.02, 27.27, 4.25, false},
    {"DiariZen-base+Para", "AISHELL5", 60.16, 66.89, 6.73, false},
    {"DiariZen-large+Para", "AliMeeting", 21.30, 23.20, 1.90, false},
    {"DiariZen-large+Para", "AISHELL4", 23.02, 25.78, 2.76, false},
    {"DiariZen-large+Para", "AISHELL5", 60.16, 61.81, 1.65, false},
    {"ChatGPT4.5 (z.s.)", "AliMeeting", 30.63, 38.64, 8.01, false},
    {"ChatGPT4.5 (z.s.)", "AISHELL4", 33.02, 39.21, 6.19, false},
    {"ChatGPT4.5 (z.s.)", "AISHELL5", 67.34, 79.05, 11.71, false},
    {"Qwen2.5-7B-Instruct (z.s.)", "AliMeeting", 40.10, 51.01, 10.91, false},
    {"Qwen2.5-7B-Instruct (z.s.)", "AISHELL4", 33.92, 44.16, 10.24, false},
    {"Qwen2.5-7B-Instruct (z.s.)", "AISHELL5", 65.67, 73.30, 7.63, false},
    {"Qwen2.5-7B-Instruct (f.t.)", "AliMeeting", 21.38, 22.65, 1.27, false},
    {"Qwen2.5-7B-Instruct (f.t.)", "AISHELL4", 23.05, 24.93, 1.88, false},
    {"Qwen2.5-7B-Instruct (f.t.)", "AISHELL5", 60.17, 61.63, 1.46, false},
    {"end-to-end (212.25h)", "AliMeeting", 18.63, 32.22, 13.59, false},
    {"end-to-end (212.25h)", "AISHELL4", 17.75, 26.14, 8.39, false},
    {"end-to-end (212.25h)", "AISHELL5", 48.40, 64.96, 16.56, false},
    {"end-to-end (694.06h)", "AliMeeting", 18.14, 29.60, 11.46, false},
    {"end-to-end (694.06h)", "AISHELL4", 17.48, 25.28, 7.80, false},
    {"end-to-end (694.06h)", "AISHELL5", 48.39, 54.81, 6.42, false},
    {"end-to-end (2,269.57h)", "AliMeeting", 17.32, 27.97, 10.65, false},
    {"end-to-end (2,269.57h)", "AISHELL4", 17.32, 23.10, 5.78, false},
    {"end-to-end (2,269.57h)", "AISHELL5", 47.78, 50.04, 2.26, false},
    {"end-to-end (7,638.95h)", "AliMeeting", 13.97, 16.05, 2.08, false},
    {"end-to-end (7,638.95h)", "AISHELL4", 17.17, 18.37, 1.20, false},
    {"end-to-end (7,638.95h)", "AISHELL5", 47.24, 47.81, 0.57, false},
    {"end-to-end (MR)", "AliMeeting", 13.98, 15.57, 1.59, true},
    {"end-to-end (OR)", "AliMeeting", 13.96, 15.71, 1.75, true},
    {"end-to-end (MR)", "AISHELL4", 17.13, 19.73, 2.60, true},
    {"end-to-end (OR)", "AISHELL4", 17.15, 20.16, 3.01, true},
    {"end-to-end (MR)", "AISHELL5", 47.05, 47.36, 0.31, true},
    {"end-to-end (OR)", "AISHELL5", 46.69, 47.35, 0.66, true},
};

Outcome TableArithmetic() {
  int bad = 0;
  double worst = 0;
  std::string first_bad;
  for (const auto &row : kTableRows) {
    const double d = row.sa ? sdr::DeltaSa(row.cer, row.score) : sdr::DeltaCp(row.cer, row.score);
    const double err = std::abs(d - row.delta);
    worst = std::max(worst, err);
    if (err > kTableDeltaTol) {
      if (!bad) first_bad = std::string(row.system) + "/" + row.set;
      ++bad;
    }
  }
  const std::size_t rows = sizeof kTableRows / sizeof kTableRows[0];
  return {bad == 0, Fmt("%zu rows, max |err| %.1e <= %.3f%s%s", rows, worst, kTableDeltaTol,
                        bad ? ", first miss " : "", first_bad.c_str())};
}

Outcome EditDistanceOracle() {
  const auto t0 = Clock::now();
  sdr::Rng rng(1234);
  int mismatches = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    auto a = testing::RandomUnits(rng, static_cast<std::size_t>(rng.UniformInt(0, 64)));
    auto b = testing::RandomUnits(rng, static_cast<std::size_t>(rng.UniformInt(0, 64)));
    const std::size_t d = oracle::TextbookDistance(a, b);
    if (sdr::EditDistance(a, b).distance() != d || sdr::Levenshtein(a, b) != d) ++mismatches;
  }
  const double secs = Since(t0);
  return {mismatches == 0 && secs < kEditDistanceBudgetS,
          Fmt("10000 pairs (<= 64, CJK/Latin), %d mismatches, %.2f s < %.0f s", mismatches, secs,
              kEditDistanceBudgetS)};
}

Outcome ScenarioCounting() {
  std::vector<sdr::SpeakerProfile> profiles;
  for (int i = 0; i < 80; ++i) profiles.push_back({"speaker" + std::to_string(i), {1.0, static_cast<double>(i)}, 1});
  const sdr::ProfilePool pool(profiles);
  int violations = 0;
  std::size_t min_ov = 1000, max_ov = 0;
  for (auto mode : {sdr::RegistrationMode::kNoRegist, sdr::RegistrationMode::kMatchRegist,
                    sdr::RegistrationMode::kOverRegist}) {
    for (int trial = 0; trial < 1000; ++trial) {
      sdr::Rng rng(sdr::DeriveSeed(static_cast<std::uint64_t>(mode) + 10, static_cast<std::uint64_t>(trial)));
      std::set<std::string> gt;
      const auto n_gt = rng.UniformInt(1, 8);
      while (static_cast<std::int64_t>(gt.size()) < n_gt) gt.insert(profiles[rng.UniformInt(0, 79)].name);
      auto s = sdr::BuildScenario(gt, pool, mode, {}, rng);
      std::set<std::string> names;
      for (const auto &p : s.profiles) names.insert(p.name);
      bool ok = static_cast<bool>(sdr::VerifyScenario(s, gt));
      switch (mode) {
        case sdr::RegistrationMode::kNoRegist:
          ok = ok && s.profiles.empty();
          break;
        case sdr::RegistrationMode::kMatchRegist:
          ok = ok && s.profiles.size() == gt.size() && names == gt;
          break;
        case sdr::RegistrationMode::kOverRegist:
          ok = ok && s.profiles.size() == gt.size() + s.n_ov && s.n_ov >= 1 && s.n_ov <= 50 &&
               names.size() == s.profiles.size() && std::includes(names.begin(), names.end(), gt.begin(), gt.end());
          min_ov = std::min(min_ov, s.n_ov);
          max_ov = std::max(max_ov, s.n_ov);
          break;
      }
      if (!ok) ++violations;
    }
  }
  return {violations == 0, Fmt("3 x 1000 scenarios, %d violations, over-regist n_ov in [%zu, %zu]", violations,
                               min_ov, max_ov)};
}

Outcome SimulationSnr() {
  const auto t0 = Clock::now();
  auto corpus = testing::MakeMemoryCorpus(8, 20, 3);
  const auto resolver = corpus.Resolver();
  int bad_snr = 0, bad_len = 0, not_identical = 0;
  double worst = 0, snr_lo = 100, snr_hi = 0;
  for (int i = 0; i < 100; ++i) {
    auto spec = sdr::SampleMixtureSpec(corpus.index, sdr::DeriveSeed(2025, static_cast<std::uint64_t>(i)),
                                       corpus.noise_refs, {}, "sim" + std::to_string(i));
    auto mix = sdr::SynthesizeMixture(spec, resolver);
    const std::string wav = sdr::WriteWav(mix.mixture);
    auto quantized = sdr::ReadWav(wav);
    if (quantized.samples.size() != kClipSamples || quantized.sample_rate != 16000) ++bad_len;

    // Rebuild the speech track from the schedule and the source audio, then
    // attribute everything else in the quantized file to noise.
    std::vector<double> speech(kClipSamples, 0.0);
    for (const auto &turn : mix.turns) {
      const auto &src = corpus.audio.at(spec.source_utterances[turn.source_index].audio).samples;
      for (std::int64_t k = 0; k < turn.end_sample - turn.start_sample && k < static_cast<std::int64_t>(src.size()); ++k)
        speech[static_cast<std::size_t>(turn.start_sample + k)] = src[static_cast<std::size_t>(k)] * mix.peak_scale;
    }
    std::vector<double> noise(kClipSamples);
    for (std::size_t k = 0; k < kClipSamples && k < quantized.samples.size(); ++k)
      noise[k] = quantized.samples[k] - speech[k];
    const double measured = oracle::SnrDb(speech, noise);
    const double err = std::abs(measured - spec.snr_db);
    worst = std::max(worst, err);
    snr_lo = std::min(snr_lo, spec.snr_db);
    snr_hi = std::max(snr_hi, spec.snr_db);
    if (err > kSnrTolDb || spec.snr_db < 10.0 || spec.snr_db > 20.0) ++bad_snr;

    auto again = sdr::SynthesizeMixture(spec, resolver);
    if (sdr::WriteWav(again.mixture) != wav ||
        sdr::SerializeTranscript(again.transcript) != sdr::SerializeTranscript(mix.transcript))
      ++not_identical;
  }
  const double secs = Since(t0);
  return {bad_snr == 0 && bad_len == 0 && not_identical == 0 && secs < kSimulationBudgetS,
          Fmt("100 mixtures, SNR in [%.2f, %.2f] dB, max |err| %.4f dB <= %.2f, %d bad lengths, %d non-identical, "
              "%.1f s < %.0f s",
              snr_lo, snr_hi, worst, kSnrTolDb, bad_len, not_identical, secs, kSimulationBudgetS)};
}

// Fixed synthetic meeting: sequential turns with short gaps.
sdr::SATranscript Meeting() {
  sdr::Rng rng(606);
  std::vector<sdr::Utterance> utts;
  std::int64_t cursor_ms = 0;
  std::string previous;
  for (int i = 0; i < 40; ++i) {
    std::string speaker;
    do speaker = "spk" + std::to_string(rng.UniformInt(0, 3));
    while (speaker == previous);
    previous = speaker;
    const std::int64_t len = rng.UniformInt(1500, 4000);
    cursor_ms += rng.UniformInt(50, 200);
    utts.push_back({speaker, testing::RandomText(rng, 8, 20, true), cursor_ms / 1000.0, (cursor_ms + len) / 1000.0});
    cursor_ms += len;
  }
  return sdr::SATranscript("meeting", utts);
}

Outcome CascadeRoundTrip() {
  sdr::Rng rng(5150);
  int nonzero = 0;
  for (int i = 0; i < 50; ++i) {
    auto ref = testing::RandomTranscript(rng, "r" + std::to_string(i), {"A", "B", "C", "D"},
                                         static_cast<std::size_t>(rng.UniformInt(1, 30)), true);
    auto fx = sdr::OracleCascade(ref);
    auto hyp = sdr::AssignTokens(fx.tokens, fx.segments, ref.clip_id());
    if (sdr::CpCer(ref, hyp, kDefault).counts.distance() != 0) ++nonzero;
  }
  auto meeting = Meeting();
  auto fx = sdr::OracleCascade(meeting);
  std::vector<double> deltas;
  std::string series;
  for (double shift : {0.0, 0.1, 0.3, 0.5}) {
    auto hyp = sdr::AssignTokens(fx.tokens, sdr::ShiftSegments(fx.segments, shift), "meeting");
    auto r = sdr::ScoreClip(meeting, hyp, kDefault, sdr::RegistrationMode::kNoRegist);
    deltas.push_back(*r.delta_cp());
    series += Fmt("%s%.2f", series.empty() ? "" : ", ", 100.0 * deltas.back());
  }
  const bool monotone = std::is_sorted(deltas.begin(), deltas.end());
  return {nonzero == 0 && monotone && deltas.front() == 0.0,
          Fmt("50 oracle refs, %d with cpCER != 0; dcp over shift 0/0.1/0.3/0.5 s = [%s]%s", nonzero, series.c_str(),
              monotone ? " non-decreasing" : " NOT monotone")};
}

std::map<std::string, std::string> Snapshot(const std::string &dir) {
  std::map<std::string, std::string> files;
  for (const auto &e : testing::fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[testing::fs::relative(e.path(), dir).string()] = testing::Slurp(e.path().string());
  return files;
}

Outcome CliDeterminism() {
  testing::TempDir dir("acceptance-cli");
  sdr::Rng rng(8);
  testing::fs::create_directories(dir.path() / "ref");
  testing::fs::create_directories(dir.path() / "hyp");
  for (int i = 0; i < 12; ++i) {
    const std::string id = "clip" + std::to_string(i);
    sdr::WriteTranscriptFile(dir / ("ref/" + id + ".jsonl"),
                             testing::RandomTranscript(rng, id, {"A", "B", "C"}, 10));
    sdr::WriteTranscriptFile(dir / ("hyp/" + id + ".jsonl"),
                             testing::RandomTranscript(rng, id, {"A", "B", "C"}, 10));
  }
  auto corpus = testing::WriteDiskCorpus(dir.path() / "corpus");

  auto run_pair = [&](const std::string &tag) {
    std::ostringstream out, err;
    sdr::RunConfig e;
    e.command = "evaluate";
    e.ref_dir = dir / "ref";
    e.hyp_dir = dir / "hyp";
    e.mode = sdr::RegistrationMode::kMatchRegist;
    e.out_dir = dir / ("eval-" + tag);
    const int ec = sdr::CmdEvaluate(e, out, err);
    sdr::RunConfig s;
    s.command = "simulate";
    s.source_manifest = corpus.source_manifest;
    s.noise_manifest = corpus.noise_manifest;
    s.num_clips = 3;
    s.seed = 99;
    s.out_dir = dir / ("sim-" + tag);
    const int sc = sdr::CmdSimulate(s, out, err);
    return ec == 0 && sc == 0;
  };
  if (!run_pair("a") || !run_pair("b")) return {false, "a command did not exit 0"};
  // Same output directory twice as well, so provenance paths match.
  auto eval_a = Snapshot(dir / "eval-a");
  auto sim_a = Snapshot(dir / "sim-a");
  if (!run_pair("a")) return {false, "rerun did not exit 0"};
  const bool same = Snapshot(dir / "eval-a") == eval_a && Snapshot(dir / "sim-a") == sim_a;
  auto strip = [](std::map<std::string, std::string> m) {
    m.erase("report.json");
    m.erase("provenance.json");
    return m;
  };
  const bool same_across_dirs =
      strip(Snapshot(dir / "eval-b")) == strip(eval_a) && strip(Snapshot(dir / "sim-b")) == strip(sim_a);
  return {same && same_across_dirs,
          Fmt("evaluate (%zu files) and simulate (%zu files) reruns %s", eval_a.size(), sim_a.size(),
              same && same_across_dirs ? "byte-identical" : "DIFFER")};
}

}  // namespace

int main() {
  Report("assignment optimality", AssignmentOptimality);
  Report("cpCER permutation invariance", CpCerInvariance);
  Report("cpCER <= saCER dominance", Dominance);
  Report("published table delta arithmetic", TableArithmetic);
  Report("edit distance oracle equivalence", EditDistanceOracle);
  Report("registration scenario counting", ScenarioCounting);
  Report("simulation SNR and duration", SimulationSnr);
  Report("cascade oracle round trip", CascadeRoundTrip);
  Report("CLI determinism", CliDeterminism);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
