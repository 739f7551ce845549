// src/report.cc

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

#include "sdr/report.h"

#include <cstdio>

namespace sdr {

namespace {

using ordered_json = nlohmann::ordered_json;

double Percent(double rate) { return 100.0 * rate; }

ordered_json CountsJson(const EditCounts &c) {
  ordered_json j;
  j["subs"] = c.substitutions;
  j["dels"] = c.deletions;
  j["ins"] = c.insertions;
  j["ref_len"] = c.reference_length;
  return j;
}

std::string OptionalCell(const std::optional<double> &v) { return v ? FormatRate2(*v) : std::string(); }

}  // namespace

std::string FormatRate2(double percent) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", percent);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

ordered_json PolicyJson(const NormalizationPolicy &p) {
  ordered_json j;
  j["strip_whitespace"] = p.strip_whitespace;
  j["strip_punctuation"] = p.strip_punctuation;
  j["unify_width"] = p.unify_width;
  j["casefold"] = p.casefold;
  return j;
}

ordered_json ScoreReportJson(const ScoreReport &r) {
  ordered_json j;
  j["clip_id"] = r.clip_id;
  j["cer"] = Percent(r.cer.rate());
  if (r.cpcer) j["cpcer"] = Percent(r.cpcer->rate());
  if (r.sacer) j["sacer"] = Percent(r.sacer->rate());
  if (auto d = r.delta_cp()) j["delta_cp"] = Percent(*d);
  if (auto d = r.delta_sa()) j["delta_sa"] = Percent(*d);
  j["ref_len"] = r.cer.counts.reference_length;
  ordered_json counts;
  counts["cer"] = CountsJson(r.cer.counts);
  if (r.cpcer) counts["cpcer"] = CountsJson(r.cpcer->counts);
  if (r.sacer) counts["sacer"] = CountsJson(r.sacer->counts);
  j["counts"] = std::move(counts);
  return j;
}

std::string RenderReportJson(const std::vector<ScoreReport> &clips, const std::optional<ScoreReport> &aggregate,
                             const ReportContext &ctx) {
  ordered_json root;
  root["provenance"] = ctx.provenance;
  root["policy"] = PolicyJson(ctx.policy);
  root["mode"] = ModeName(ctx.mode);
  root["units"] = "percent";
  root["pooling"] = "micro";
  ordered_json arr = ordered_json::array();
  for (const auto &r : clips) arr.push_back(ScoreReportJson(r));
  root["clips"] = std::move(arr);
  root["aggregate"] = aggregate ? ScoreReportJson(*aggregate) : ordered_json(nullptr);
  root["unmatched"] = ctx.unmatched;
  ordered_json failures = ordered_json::array();
  for (const auto &[clip, message] : ctx.failures) failures.push_back({{"clip_id", clip}, {"error", message}});
  root["failures"] = std::move(failures);
  return root.dump(2, ' ', false) + "\n";
}

std::string RenderReportCsv(const std::vector<ScoreReport> &clips, const std::optional<ScoreReport> &aggregate) {
  std::string out =
      "clip_id,cer,cpcer,sacer,delta_cp,delta_sa,subs,dels,ins,ref_len,"
      "cp_subs,cp_dels,cp_ins,sa_subs,sa_dels,sa_ins\n";
  auto row = [&out](const ScoreReport &r) {
    auto pct = [](const std::optional<MetricScore> &m) {
      return m ? std::optional<double>(Percent(m->rate())) : std::nullopt;
    };
    auto pct_delta = [](const std::optional<double> &d) {
      return d ? std::optional<double>(Percent(*d)) : std::nullopt;
    };
    auto counts = [](const std::optional<MetricScore> &m) {
      if (!m) return std::string(",,");
      return std::to_string(m->counts.substitutions) + "," + std::to_string(m->counts.deletions) + "," +
             std::to_string(m->counts.insertions);
    };
    // clip ids come from JSON strings; quote only when needed.
    std::string id = r.clip_id;
    if (id.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char c : id) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
      id = q + "\"";
    }
    out += id + "," + FormatRate2(Percent(r.cer.rate())) + "," + OptionalCell(pct(r.cpcer)) + "," +
           OptionalCell(pct(r.sacer)) + "," + OptionalCell(pct_delta(r.delta_cp())) + "," +
           OptionalCell(pct_delta(r.delta_sa())) + "," + std::to_string(r.cer.counts.substitutions) + "," +
           std::to_string(r.cer.counts.deletions) + "," + std::to_string(r.cer.counts.insertions) + "," +
           std::to_string(r.cer.counts.reference_length) + "," + counts(r.cpcer) + "," + counts(r.sacer) + "\n";
  };
  for (const auto &r : clips) row(r);
  if (aggregate) row(*aggregate);
  return out;
}

}  // namespace sdr
