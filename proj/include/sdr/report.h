// include/sdr/report.h

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

#ifndef SDR_REPORT_H_
#define SDR_REPORT_H_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sdr/metrics.h"

namespace sdr {

// Rates in emitted reports are percentages (100 * errors / ref_len), the
// unit the published result tables use. JSON keeps full precision; CSV is
// rounded to two decimals.
struct ReportContext {
  NormalizationPolicy policy;
  RegistrationMode mode = RegistrationMode::kNoRegist;
  nlohmann::ordered_json provenance = nlohmann::ordered_json::object();
  std::vector<std::string> unmatched;                          // clip ids
  std::vector<std::pair<std::string, std::string>> failures;  // clip id, message
};

nlohmann::ordered_json ScoreReportJson(const ScoreReport &r);
nlohmann::ordered_json PolicyJson(const NormalizationPolicy &p);

std::string RenderReportJson(const std::vector<ScoreReport> &clips, const std::optional<ScoreReport> &aggregate,
                             const ReportContext &ctx);

// Header: clip_id,cer,cpcer,sacer,delta_cp,delta_sa,subs,dels,ins,ref_len,
// cp_subs,cp_dels,cp_ins,sa_subs,sa_dels,sa_ins. subs/dels/ins are the CER
// alignment counts; absent metrics leave empty cells. The last row has
// clip_id AGGREGATE.
std::string RenderReportCsv(const std::vector<ScoreReport> &clips, const std::optional<ScoreReport> &aggregate);

// "%.2f" with negative zero folded to "0.00".
std::string FormatRate2(double percent);

}  // namespace sdr

#endif  // SDR_REPORT_H_
