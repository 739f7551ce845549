// src/commands.cc

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

#include "sdr/commands.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <omp.h>
#include <openssl/evp.h>

#include "json.hpp"
#include "sdr/cascade.h"
#include "sdr/report.h"
#include "sdr/simulate.h"
#include "sdr/transcript.h"
#include "sdr/wav.h"

namespace fs = std::filesystem;

namespace sdr {

namespace {

using ordered_json = nlohmann::ordered_json;

class Diagnostics {
 public:
  Diagnostics(std::ostream &err, std::string command) : err_(err), command_(std::move(command)) {}

  void Error(const std::string &item, const std::string &message) { Emit("error", item, message), ++errors_; }
  void Warning(const std::string &item, const std::string &message) { Emit("warning", item, message); }
  std::size_t errors() const { return errors_; }

 private:
  void Emit(const char *level, const std::string &item, const std::string &message) {
    ordered_json j;
    j["level"] = level;
    j["command"] = command_;
    j["item"] = item;
    j["message"] = message;
    err_ << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << "\n";
  }

  std::ostream &err_;
  std::string command_;
  std::size_t errors_ = 0;
};

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const fs::path &path, const std::string &bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << bytes;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Regular files directly under `path` with one of `extensions`, sorted; a
// plain file is returned as-is.
std::vector<std::string> ListInputs(const std::string &path, std::initializer_list<const char *> extensions) {
  std::vector<std::string> files;
  if (fs::is_regular_file(path)) return {path};
  if (!fs::is_directory(path)) throw std::runtime_error("no such file or directory: " + path);
  for (const auto &entry : fs::directory_iterator(path)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    for (const char *e : extensions) {
      if (ext == e) {
        files.push_back(entry.path().string());
        break;
      }
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

ordered_json Provenance(const RunConfig &c, const std::vector<std::string> &inputs) {
  ordered_json p;
  p["tool"] = kToolName;
  p["version"] = kToolVersion;
  p["command"] = c.command;
  ordered_json cfg;
  cfg["seed"] = c.seed;
  cfg["jobs"] = c.jobs;
  cfg["mode"] = ModeName(c.mode);
  cfg["policy"] = PolicyJson(c.policy);
  cfg["out"] = c.out_dir;
  if (c.command == "evaluate") {
    cfg["ref"] = c.ref_dir;
    cfg["hyp"] = c.hyp_dir;
  } else if (c.command == "scenario") {
    cfg["pool"] = c.pool_path;
    cfg["ref"] = c.ref_dir;
    cfg["gt"] = c.gt_path;
    cfg["n_ov_min"] = c.n_ov_range.min;
    cfg["n_ov_max"] = c.n_ov_range.max;
  } else if (c.command == "simulate") {
    cfg["source_manifest"] = c.source_manifest;
    cfg["noise_manifest"] = c.noise_manifest;
    cfg["rir_manifest"] = c.rir_manifest;
    cfg["num_clips"] = c.num_clips;
  } else if (c.command == "cascade") {
    cfg["rttm"] = c.rttm_path;
    cfg["tokens"] = c.tokens_path;
    cfg["token_joiner"] = c.token_joiner;
  }
  p["config"] = std::move(cfg);
  ordered_json digests = ordered_json::array();
  std::vector<std::string> sorted(inputs);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (const auto &path : sorted) {
    ordered_json d;
    d["path"] = path;
    try {
      d["sha256"] = FileSha256(path);
    } catch (const std::exception &) {
      d["sha256"] = nullptr;
    }
    digests.push_back(std::move(d));
  }
  p["inputs"] = std::move(digests);
  return p;
}

int Threads(int jobs) { return jobs > 0 ? jobs : omp_get_max_threads(); }

// clip_id -> transcript, for every *.jsonl file in a directory.
std::map<std::string, SATranscript> LoadTranscriptDir(const std::string &dir, const char *side,
                                                      std::vector<std::string> &inputs, Diagnostics &diag) {
  std::map<std::string, SATranscript> out;
  for (const auto &file : ListInputs(dir, {".jsonl"})) {
    inputs.push_back(file);
    try {
      SATranscript t = ReadTranscriptFile(file);
      std::string id = t.clip_id();
      if (!out.emplace(id, std::move(t)).second) diag.Error(file, std::string("duplicate ") + side + " clip_id " + id);
    } catch (const std::exception &e) {
      diag.Error(file, e.what());
    }
  }
  return out;
}

}  // namespace

std::string FileSha256(const std::string &path) {
  const std::string bytes = ReadFile(path);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("SHA-256 failed");
  static const char *kHex = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 15]);
  }
  return hex;
}

std::string FileStem(const std::string &id) {
  std::string out;
  for (unsigned char c : id) {
    const bool safe = std::isalnum(c) || c == '.' || c == '_' || c == '-' || c >= 0x80;
    out.push_back(safe ? static_cast<char>(c) : '_');
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

int CmdEvaluate(const RunConfig &config, std::ostream &out, std::ostream &err) {
  Diagnostics diag(err, "evaluate");
  std::vector<std::string> inputs;
  std::map<std::string, SATranscript> refs, hyps;
  try {
    refs = LoadTranscriptDir(config.ref_dir, "reference", inputs, diag);
    hyps = LoadTranscriptDir(config.hyp_dir, "hypothesis", inputs, diag);
  } catch (const std::exception &e) {
    diag.Error("config", e.what());
    return kExitConfig;
  }

  ReportContext ctx;
  ctx.policy = config.policy;
  ctx.mode = config.mode;
  std::vector<ClipPair> pairs;
  for (const auto &[id, ref] : refs) {
    auto it = hyps.find(id);
    if (it == hyps.end()) {
      ctx.unmatched.push_back(id);
      diag.Error(id, "no hypothesis with this clip_id");
      continue;
    }
    pairs.push_back({ref, it->second});
  }
  for (const auto &[id, hyp] : hyps) {
    if (!refs.contains(id)) {
      ctx.unmatched.push_back(id);
      diag.Error(id, "no reference with this clip_id");
    }
  }
  std::sort(ctx.unmatched.begin(), ctx.unmatched.end());
  if (pairs.empty()) {
    diag.Error("config", "no clip_id is present in both reference and hypothesis sets");
    return kExitConfig;
  }

  std::vector<ScoreReport> reports;
  for (auto &outcome : ScoreCorpus(pairs, config.policy, config.mode, config.jobs)) {
    if (outcome.report) {
      reports.push_back(std::move(*outcome.report));
    } else {
      ctx.failures.emplace_back(outcome.clip_id, outcome.error);
      diag.Error(outcome.clip_id, outcome.error);
    }
  }
  std::optional<ScoreReport> aggregate;
  if (!reports.empty()) aggregate = Aggregate(reports);
  ctx.provenance = Provenance(config, inputs);

  try {
    fs::create_directories(config.out_dir);
    WriteFile(fs::path(config.out_dir) / "report.json", RenderReportJson(reports, aggregate, ctx));
    WriteFile(fs::path(config.out_dir) / "report.csv", RenderReportCsv(reports, aggregate));
  } catch (const std::exception &e) {
    diag.Error("output", e.what());
    return kExitConfig;
  }

  out << "scored " << reports.size() << " clip(s), " << ctx.unmatched.size() << " unmatched, "
      << ctx.failures.size() << " failed";
  if (aggregate) {
    out << "; CER " << FormatRate2(100.0 * aggregate->cer.rate());
    if (aggregate->cpcer) out << " cpCER " << FormatRate2(100.0 * aggregate->cpcer->rate());
    if (aggregate->sacer) out << " saCER " << FormatRate2(100.0 * aggregate->sacer->rate());
    if (auto d = aggregate->delta_cp()) out << " dcp " << FormatRate2(100.0 * *d);
    if (auto d = aggregate->delta_sa()) out << " dsa " << FormatRate2(100.0 * *d);
  }
  out << "\n";
  return diag.errors() ? kExitPartial : kExitOk;
}

int CmdSimulate(const RunConfig &config, std::ostream &out, std::ostream &err) {
  Diagnostics diag(err, "simulate");
  std::vector<std::string> inputs;
  CorpusIndex corpus;
  std::vector<std::string> noises, rirs;
  try {
    inputs.push_back(config.source_manifest);
    corpus = CorpusIndex::FromManifest(ReadFile(config.source_manifest),
                                       fs::path(config.source_manifest).parent_path().string());
    if (!config.noise_manifest.empty()) {
      inputs.push_back(config.noise_manifest);
      noises = ParsePathManifest(ReadFile(config.noise_manifest),
                                 fs::path(config.noise_manifest).parent_path().string());
    }
    if (!config.rir_manifest.empty()) {
      inputs.push_back(config.rir_manifest);
      rirs = ParsePathManifest(ReadFile(config.rir_manifest), fs::path(config.rir_manifest).parent_path().string());
    }
    if (corpus.speakers().size() < static_cast<std::size_t>(kMaxSpeakers) || corpus.total_duration() < kMixtureDuration)
      throw std::runtime_error("insufficient corpus: need at least 4 speakers and 50 s of audio");
    fs::create_directories(config.out_dir);
  } catch (const std::exception &e) {
    diag.Error("config", e.what());
    return kExitConfig;
  }
  if (noises.empty()) diag.Warning("noise", "noise manifest is empty; writing clean concatenations");

  const AudioResolver resolver = [](const std::string &ref) { return ReadWavFile(ref); };
  const auto n = static_cast<std::ptrdiff_t>(config.num_clips);
  std::vector<std::optional<ordered_json>> entries(config.num_clips);
  std::vector<std::string> errors(config.num_clips);
#pragma omp parallel for schedule(dynamic) num_threads(Threads(config.jobs))
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "sim_%06td", i);
    try {
      MixtureSpec spec = SampleMixtureSpec(corpus, DeriveSeed(config.seed, static_cast<std::uint64_t>(i)), noises,
                                           rirs, id);
      MixtureResult mix = SynthesizeMixture(spec, resolver);
      const std::string stem = id;
      WriteWavFile((fs::path(config.out_dir) / (stem + ".wav")).string(), mix.mixture);
      WriteTranscriptFile((fs::path(config.out_dir) / (stem + ".jsonl")).string(), mix.transcript);
      ordered_json spec_json = MixtureSpecJson(spec);
      spec_json["peak_scale"] = mix.peak_scale;
      spec_json["noise_added"] = mix.noise_added;
      WriteFile(fs::path(config.out_dir) / (stem + ".spec.json"), spec_json.dump(2, ' ', false) + "\n");
      ordered_json entry;
      entry["clip_id"] = stem;
      entry["wav"] = stem + ".wav";
      entry["transcript"] = stem + ".jsonl";
      entry["spec"] = stem + ".spec.json";
      entry["duration"] = spec.target_duration;
      entry["samples"] = mix.mixture.samples.size();
      entry["n_speakers"] = spec.n_speakers;
      entry["snr_db"] = spec.snr_db;
      entries[static_cast<std::size_t>(i)] = std::move(entry);
    } catch (const std::exception &e) {
      errors[static_cast<std::size_t>(i)] = e.what();
    }
  }

  std::string manifest;
  std::size_t written = 0;
  for (std::size_t i = 0; i < config.num_clips; ++i) {
    if (entries[i]) {
      manifest += entries[i]->dump(-1, ' ', false) + "\n";
      ++written;
    } else {
      char id[32];
      std::snprintf(id, sizeof id, "sim_%06zu", i);
      diag.Error(id, errors[i]);
    }
  }
  try {
    WriteFile(fs::path(config.out_dir) / "manifest.jsonl", manifest);
    WriteFile(fs::path(config.out_dir) / "provenance.json", Provenance(config, inputs).dump(2, ' ', false) + "\n");
  } catch (const std::exception &e) {
    diag.Error("output", e.what());
    return kExitConfig;
  }
  out << "simulated " << written << " of " << config.num_clips << " clip(s)\n";
  return diag.errors() ? kExitPartial : kExitOk;
}

int CmdScenario(const RunConfig &config, std::ostream &out, std::ostream &err) {
  Diagnostics diag(err, "scenario");
  std::vector<std::string> inputs;
  ProfilePool pool;
  std::map<std::string, std::set<std::string>> gt;
  try {
    if (config.mode != RegistrationMode::kNoRegist || !config.pool_path.empty()) {
      inputs.push_back(config.pool_path);
      pool = ParseProfilePool(ReadFile(config.pool_path));
    }
    if (!config.gt_path.empty()) {
      inputs.push_back(config.gt_path);
      std::istringstream lines(ReadFile(config.gt_path));
      std::string line;
      std::size_t line_no = 0;
      while (std::getline(lines, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto rec = nlohmann::json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.contains("clip_id") || !rec.contains("speakers") || !rec["speakers"].is_array())
          throw ParseError(line_no, config.gt_path + ": expected {\"clip_id\", \"speakers\": [...]}");
        auto &names = gt[rec["clip_id"].get<std::string>()];
        for (const auto &s : rec["speakers"]) names.insert(s.get<std::string>());
      }
    } else {
      for (const auto &[id, t] : LoadTranscriptDir(config.ref_dir, "reference", inputs, diag)) gt[id] = t.speaker_set();
    }
    fs::create_directories(config.out_dir);
  } catch (const std::exception &e) {
    diag.Error("config", e.what());
    return kExitConfig;
  }

  std::size_t written = 0;
  for (const auto &[clip_id, speakers] : gt) {
    Rng rng(DeriveSeed(config.seed, HashString(clip_id)));
    try {
      RegistrationScenario s = BuildScenario(speakers, pool, config.mode, config.n_ov_range, rng);
      Verdict v = VerifyScenario(s, speakers);
      if (!v) throw std::logic_error("generated scenario violates " + v.clause);
      ordered_json j;
      j["clip_id"] = clip_id;
      const ordered_json body = ScenarioJson(s);
      for (const auto &[k, val] : body.items()) j[k] = val;
      WriteFile(fs::path(config.out_dir) / (FileStem(clip_id) + ".scenario.json"), j.dump(2, ' ', false) + "\n");
      ++written;
    } catch (const std::exception &e) {
      diag.Error(clip_id, e.what());
    }
  }
  try {
    WriteFile(fs::path(config.out_dir) / "provenance.json", Provenance(config, inputs).dump(2, ' ', false) + "\n");
  } catch (const std::exception &e) {
    diag.Error("output", e.what());
    return kExitConfig;
  }
  out << "wrote " << written << " scenario(s) for " << gt.size() << " clip(s)\n";
  return diag.errors() ? kExitPartial : kExitOk;
}

int CmdCascade(const RunConfig &config, std::ostream &out, std::ostream &err) {
  Diagnostics diag(err, "cascade");
  std::vector<std::string> inputs;
  std::map<std::string, std::vector<DiarSegment>> segments;
  std::map<std::string, std::vector<TimedToken>> tokens;
  std::set<std::string> broken;
  try {
    for (const auto &file : ListInputs(config.rttm_path, {".rttm"})) {
      inputs.push_back(file);
      RttmContents c = ReadRttm(ReadFile(file));
      for (auto &[rec, segs] : c.by_recording)
        for (auto &s : segs) segments[rec].push_back(std::move(s));
      for (const auto &e : c.errors) {
        const std::string rec = e.recording.value_or("?");
        broken.insert(rec);
        diag.Error(rec, file + ": line " + std::to_string(e.line) + ": " + e.message);
      }
    }
    for (const auto &file : ListInputs(config.tokens_path, {".ctm", ".tokens"})) {
      inputs.push_back(file);
      TokenContents c = ReadTokens(ReadFile(file));
      for (auto &[rec, toks] : c.by_recording)
        for (auto &t : toks) tokens[rec].push_back(std::move(t));
      for (const auto &e : c.errors) {
        const std::string rec = e.recording.value_or("?");
        broken.insert(rec);
        diag.Error(rec, file + ": line " + std::to_string(e.line) + ": " + e.message);
      }
    }
    fs::create_directories(config.out_dir);
  } catch (const std::exception &e) {
    diag.Error("config", e.what());
    return kExitConfig;
  }

  std::set<std::string> recordings;
  for (const auto &[rec, s] : segments) recordings.insert(rec);
  for (const auto &[rec, t] : tokens) recordings.insert(rec);
  std::size_t written = 0;
  for (const auto &rec : recordings) {
    if (broken.contains(rec)) {
      diag.Warning(rec, "recording skipped because its input has malformed lines");
      continue;
    }
    try {
      auto tok_it = tokens.find(rec);
      std::vector<TimedToken> toks = tok_it == tokens.end() ? std::vector<TimedToken>{} : tok_it->second;
      if (toks.empty()) diag.Warning(rec, "no tokens; writing an empty transcript");
      auto seg_it = segments.find(rec);
      std::vector<DiarSegment> segs = seg_it == segments.end() ? std::vector<DiarSegment>{} : seg_it->second;
      SATranscript t = AssignTokens(std::move(toks), std::move(segs), rec, config.token_joiner);
      WriteTranscriptFile((fs::path(config.out_dir) / (FileStem(rec) + ".jsonl")).string(), t);
      ++written;
    } catch (const std::exception &e) {
      diag.Error(rec, e.what());
    }
  }
  out << "wrote " << written << " of " << recordings.size() << " recording(s)\n";
  return diag.errors() ? kExitPartial : kExitOk;
}

}  // namespace sdr
