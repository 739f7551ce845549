// tools/sdr.cc

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

// Command-line front end: evaluate, simulate, scenario, cascade.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "sdr/commands.h"

int main(int argc, char **argv) {
  sdr::RunConfig config;
  bool strip_ws = config.policy.strip_whitespace, strip_punct = config.policy.strip_punctuation,
       unify_width = config.policy.unify_width, casefold = config.policy.casefold;
  std::string mode = sdr::ModeName(config.mode);

  CLI::App app{"Speaker-attributed transcription scoring and data tools", sdr::kToolName};
  app.set_version_flag("--version", sdr::kToolVersion);
  app.require_subcommand(1);

  const std::map<std::string, sdr::RegistrationMode> modes = {
      {"no-regist", sdr::RegistrationMode::kNoRegist},
      {"match-regist", sdr::RegistrationMode::kMatchRegist},
      {"over-regist", sdr::RegistrationMode::kOverRegist}};

  auto common = [&](CLI::App *sub) {
    sub->add_option("--out", config.out_dir, "Output directory")->required();
    sub->add_option("--seed", config.seed, "Random seed")->capture_default_str();
    sub->add_option("--jobs", config.jobs, "Worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sub->add_flag("--policy-strip-whitespace,!--no-policy-strip-whitespace", strip_ws,
                  "Drop whitespace before scoring (default on)");
    sub->add_flag("--policy-strip-punct", strip_punct, "Drop punctuation before scoring");
    sub->add_flag("--policy-unify-width", unify_width, "Map full-width forms to half-width");
    sub->add_flag("--policy-casefold", casefold, "Unicode case folding");
    sub->add_option("--mode", mode, "Registration mode")
        ->check(CLI::IsMember({"no-regist", "match-regist", "over-regist"}))
        ->capture_default_str();
  };

  auto *evaluate = app.add_subcommand("evaluate", "Score hypothesis transcripts against references");
  common(evaluate);
  evaluate->add_option("--ref", config.ref_dir, "Reference transcript directory (*.jsonl)")->required();
  evaluate->add_option("--hyp", config.hyp_dir, "Hypothesis transcript directory (*.jsonl)")->required();

  auto *simulate = app.add_subcommand("simulate", "Generate simulated multi-speaker mixtures");
  common(simulate);
  simulate->add_option("--source-manifest", config.source_manifest, "Source utterance manifest (JSONL)")
      ->required();
  simulate->add_option("--noise-manifest", config.noise_manifest, "Noise recordings (one path per line or JSONL)");
  simulate->add_option("--rir-manifest", config.rir_manifest, "Room impulse responses (one path per line or JSONL)");
  simulate->add_option("--num", config.num_clips, "Number of clips")->check(CLI::PositiveNumber)->capture_default_str();

  auto *scenario = app.add_subcommand("scenario", "Build speaker registration scenarios");
  common(scenario);
  scenario->add_option("--pool", config.pool_path, "Profile pool (JSONL)");
  auto *ref_opt = scenario->add_option("--ref", config.ref_dir, "Reference transcripts giving ground-truth speakers");
  auto *gt_opt = scenario->add_option("--gt", config.gt_path, "Ground-truth speaker lists (JSONL)");
  ref_opt->excludes(gt_opt);
  scenario->add_option("--n-ov-min", config.n_ov_range.min, "Minimum over-registration count")->capture_default_str();
  scenario->add_option("--n-ov-max", config.n_ov_range.max, "Maximum over-registration count")->capture_default_str();

  auto *cascade = app.add_subcommand("cascade", "Merge diarization and timed ASR tokens into transcripts");
  common(cascade);
  cascade->add_option("--rttm", config.rttm_path, "RTTM file or directory")->required();
  cascade->add_option("--tokens", config.tokens_path, "CTM token file or directory")->required();
  cascade->add_option("--token-joiner", config.token_joiner, "String placed between merged tokens");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? sdr::kExitOk : sdr::kExitConfig;
  }

  config.policy = {strip_ws, strip_punct, unify_width, casefold};
  config.mode = modes.at(mode);
  if (scenario->parsed()) {
    if (config.ref_dir.empty() && config.gt_path.empty()) {
      std::cerr << "scenario: one of --ref or --gt is required\n";
      return sdr::kExitConfig;
    }
    if (config.n_ov_range.min < 1 || config.n_ov_range.max < config.n_ov_range.min) {
      std::cerr << "scenario: need 1 <= --n-ov-min <= --n-ov-max\n";
      return sdr::kExitConfig;
    }
    if (config.mode != sdr::RegistrationMode::kNoRegist && config.pool_path.empty()) {
      std::cerr << "scenario: --pool is required for registered modes\n";
      return sdr::kExitConfig;
    }
  }

  if (evaluate->parsed()) return (config.command = "evaluate", sdr::CmdEvaluate(config, std::cout, std::cerr));
  if (simulate->parsed()) return (config.command = "simulate", sdr::CmdSimulate(config, std::cout, std::cerr));
  if (scenario->parsed()) return (config.command = "scenario", sdr::CmdScenario(config, std::cout, std::cerr));
  config.command = "cascade";
  return sdr::CmdCascade(config, std::cout, std::cerr);
}
