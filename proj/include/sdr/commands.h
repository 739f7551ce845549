// include/sdr/commands.h

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

#ifndef SDR_COMMANDS_H_
#define SDR_COMMANDS_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sdr/metrics.h"
#include "sdr/registration.h"

namespace sdr {

inline constexpr const char *kToolName = "sdr";
inline constexpr const char *kToolVersion = "0.1.0";

// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitPartial = 2 };

struct RunConfig {
  std::string command;
  std::string out_dir;
  NormalizationPolicy policy = NormalizationPolicy::ScoringDefault();
  RegistrationMode mode = RegistrationMode::kNoRegist;
  std::uint64_t seed = 0;
  int jobs = 0;  // 0 = OpenMP default

  // evaluate / scenario
  std::string ref_dir;
  std::string hyp_dir;
  // scenario
  std::string pool_path;
  std::string gt_path;  // alternative to ref_dir: JSONL {"clip_id", "speakers": [...]}
  OverRegistRange n_ov_range;
  // simulate
  std::string source_manifest;
  std::string noise_manifest;
  std::string rir_manifest;
  std::size_t num_clips = 1;
  // cascade
  std::string rttm_path;   // file or directory of *.rttm
  std::string tokens_path; // file or directory of *.ctm
  std::string token_joiner;
};

// Each command writes its artifacts under config.out_dir, a one-line summary
// to `out`, and machine-readable diagnostics to `err` as JSON lines
// ({"level", "command", "item", "message"}).
int CmdEvaluate(const RunConfig &config, std::ostream &out, std::ostream &err);
int CmdSimulate(const RunConfig &config, std::ostream &out, std::ostream &err);
int CmdScenario(const RunConfig &config, std::ostream &out, std::ostream &err);
int CmdCascade(const RunConfig &config, std::ostream &out, std::ostream &err);

// Lower-case hex SHA-256 of a file's bytes.
std::string FileSha256(const std::string &path);

// Maps a clip/recording id onto a safe file stem.
std::string FileStem(const std::string &id);

}  // namespace sdr

#endif  // SDR_COMMANDS_H_
