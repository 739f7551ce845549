// include/sdr/metrics.h

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

#ifndef SDR_METRICS_H_
#define SDR_METRICS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sdr/textdist.h"
#include "sdr/transcript.h"

namespace sdr {

// Speaker label -> that speaker's normalized utterance texts, joined in
// canonical order.
using SpeakerConcat = std::map<std::string, UnitSeq>;

SpeakerConcat ConcatBySpeaker(const SATranscript &t, const NormalizationPolicy &policy);
UnitSeq ConcatAll(const SATranscript &t, const NormalizationPolicy &policy);

// Dense row-major matrix of non-negative integer edit costs.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, std::int64_t fill = 0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::int64_t &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::int64_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  friend bool operator==(const CostMatrix &, const CostMatrix &) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::int64_t> data_;
};

// Square cost matrix between reference speakers (rows) and hypothesis
// speakers (columns). The smaller side is padded with empty-text virtual
// speakers, whose labels are std::nullopt.
struct SpeakerCosts {
  std::vector<std::optional<std::string>> ref_labels;
  std::vector<std::optional<std::string>> hyp_labels;
  CostMatrix cost;
};

// Cells are filled in parallel (OpenMP). The serial variant is the reference
// the parallel kernel is tested against.
SpeakerCosts AssignmentCosts(const SpeakerConcat &refc, const SpeakerConcat &hypc);
SpeakerCosts AssignmentCostsSerial(const SpeakerConcat &refc, const SpeakerConcat &hypc);

struct AssignmentResult {
  std::vector<std::size_t> col_for_row;  // a permutation of 0..n-1
  std::int64_t total_cost = 0;
};

// Minimum-cost perfect matching (Kuhn-Munkres with potentials, O(n^3)).
// Throws std::invalid_argument on a non-square matrix or a negative entry.
AssignmentResult SolveAssignment(const CostMatrix &cost);

struct SpeakerPair {
  std::optional<std::string> ref;  // nullopt for a pad
  std::optional<std::string> hyp;
  EditCounts counts;
};

struct CpCerResult {
  double rate = 0.0;
  EditCounts counts;  // summed over matched pairs; distance() == total_cost
  AssignmentResult assignment;
  std::vector<SpeakerPair> pairs;
};

struct RateResult {
  double rate = 0.0;
  EditCounts counts;
};

// All three throw std::domain_error("undefined rate") when the normalized
// reference text is empty.
RateResult ComputeCer(const SATranscript &ref, const SATranscript &hyp, const NormalizationPolicy &policy);
CpCerResult CpCer(const SATranscript &ref, const SATranscript &hyp, const NormalizationPolicy &policy);
// Speaker names are matched by exact equality after NFC normalization.
RateResult SaCer(const SATranscript &ref, const SATranscript &hyp, const NormalizationPolicy &policy);

inline double DeltaCp(double cer, double cpcer) { return cpcer - cer; }
inline double DeltaSa(double cer, double sacer) { return sacer - cer; }

enum class RegistrationMode { kNoRegist, kMatchRegist, kOverRegist };

const char *ModeName(RegistrationMode mode);  // "no-regist", ...
RegistrationMode ParseMode(const std::string &name);

struct MetricScore {
  EditCounts counts;
  double rate() const { return ErrorRate(counts); }
};

struct ScoreReport {
  std::string clip_id;
  MetricScore cer;
  std::optional<MetricScore> cpcer;
  std::optional<MetricScore> sacer;

  std::optional<double> delta_cp() const;
  std::optional<double> delta_sa() const;
};

// Scores one clip. No-Regist anonymizes the hypothesis and leaves saCER out;
// the registered modes report CER, cpCER and saCER.
ScoreReport ScoreClip(const SATranscript &ref, const SATranscript &hyp,
                      const NormalizationPolicy &policy, RegistrationMode mode);

// Micro-average: edit counts and reference lengths are pooled across clips
// (folded in clip_id order) and every rate is recomputed from the pooled
// counts. Throws std::invalid_argument on an empty list or when metric
// availability differs between clips.
ScoreReport Aggregate(const std::vector<ScoreReport> &reports);

struct ClipPair {
  SATranscript ref;
  SATranscript hyp;
};

struct ClipOutcome {
  std::string clip_id;
  std::optional<ScoreReport> report;
  std::string error;  // set when report is empty
};

// Per-clip scoring fanned out over `jobs` OpenMP threads (0 = runtime
// default). Output is in clip_id order whatever the completion order.
std::vector<ClipOutcome> ScoreCorpus(const std::vector<ClipPair> &pairs, const NormalizationPolicy &policy,
                                     RegistrationMode mode, int jobs);
std::vector<ClipOutcome> ScoreCorpusSerial(const std::vector<ClipPair> &pairs,
                                           const NormalizationPolicy &policy, RegistrationMode mode);

}  // namespace sdr

#endif  // SDR_METRICS_H_
