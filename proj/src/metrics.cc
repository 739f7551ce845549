// src/metrics.cc

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

#include "sdr/metrics.h"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include <omp.h>

#include "sdr/unicode.h"

namespace sdr {

namespace {

std::vector<std::optional<std::string>> PaddedLabels(const SpeakerConcat &c, std::size_t n) {
  std::vector<std::optional<std::string>> labels;
  labels.reserve(n);
  for (const auto &[name, text] : c) labels.emplace_back(name);
  labels.resize(n);
  return labels;
}

const UnitSeq &TextOf(const SpeakerConcat &c, const std::optional<std::string> &label) {
  static const UnitSeq kEmpty;
  if (!label) return kEmpty;
  return c.at(*label);
}

SpeakerCosts CostSkeleton(const SpeakerConcat &refc, const SpeakerConcat &hypc) {
  const std::size_t n = std::max(refc.size(), hypc.size());
  return {PaddedLabels(refc, n), PaddedLabels(hypc, n), CostMatrix(n, n)};
}

std::size_t TotalLength(const SpeakerConcat &c) {
  std::size_t total = 0;
  for (const auto &[name, text] : c) total += text.size();
  return total;
}

}  // namespace

SpeakerConcat ConcatBySpeaker(const SATranscript &t, const NormalizationPolicy &policy) {
  SpeakerConcat out;
  for (const auto &u : t.utterances()) out[u.speaker] += Normalize(u.text, policy);
  return out;
}

UnitSeq ConcatAll(const SATranscript &t, const NormalizationPolicy &policy) {
  UnitSeq out;
  for (const auto &u : t.utterances()) out += Normalize(u.text, policy);
  return out;
}

SpeakerCosts AssignmentCosts(const SpeakerConcat &refc, const SpeakerConcat &hypc) {
  SpeakerCosts sc = CostSkeleton(refc, hypc);
  const auto n = static_cast<std::ptrdiff_t>(sc.cost.rows());
#pragma omp parallel for collapse(2) schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      const UnitSeq &r = TextOf(refc, sc.ref_labels[i]);
      const UnitSeq &h = TextOf(hypc, sc.hyp_labels[j]);
      sc.cost(i, j) = static_cast<std::int64_t>(Levenshtein(r, h));
    }
  }
  return sc;
}

SpeakerCosts AssignmentCostsSerial(const SpeakerConcat &refc, const SpeakerConcat &hypc) {
  SpeakerCosts sc = CostSkeleton(refc, hypc);
  const std::size_t n = sc.cost.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      sc.cost(i, j) = static_cast<std::int64_t>(
          Levenshtein(TextOf(refc, sc.ref_labels[i]), TextOf(hypc, sc.hyp_labels[j])));
    }
  }
  return sc;
}

AssignmentResult SolveAssignment(const CostMatrix &cost) {
  if (cost.rows() != cost.cols()) throw std::invalid_argument("assignment cost matrix is not square");
  const std::size_t n = cost.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (cost(i, j) < 0) throw std::invalid_argument("assignment cost matrix has a negative entry");

  AssignmentResult result;
  if (n == 0) return result;

  // 1-based potentials; column 0 is the virtual start of each augmenting path.
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0);
  std::vector<std::size_t> row_of_col(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    row_of_col[0] = i;
    std::size_t j0 = 0;
    std::vector<std::int64_t> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = row_of_col[j0];
      std::int64_t delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of_col[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      row_of_col[j0] = row_of_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  result.col_for_row.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) result.col_for_row[row_of_col[j] - 1] = j - 1;
  for (std::size_t i = 0; i < n; ++i) result.total_cost += cost(i, result.col_for_row[i]);
  return result;
}

RateResult ComputeCer(const SATranscript &ref, const SATranscript &hyp, const NormalizationPolicy &policy) {
  RateResult r;
  r.counts = EditDistance(ConcatAll(ref, policy), ConcatAll(hyp, policy));
  r.rate = ErrorRate(r.counts);
  return r;
}

CpCerResult CpCer(const SATranscript &ref, const SATranscript &hyp, const NormalizationPolicy &policy) {
  const SpeakerConcat refc = ConcatBySpeaker(ref, policy);
  const SpeakerConcat hypc = ConcatBySpeaker(hyp, policy);
  const std::size_t ref_len = TotalLength(refc);
  if (ref_len == 0) throw std::domain_error("undefined rate");

  const SpeakerCosts sc = AssignmentCosts(refc, hypc);
  CpCerResult out;
  out.assignment = SolveAssignment(sc.cost);
  for (std::size_t i = 0; i < sc.ref_labels.size(); ++i) {
    const std::size_t j = out.assignment.col_for_row[i];
    SpeakerPair pair{sc.ref_labels[i], sc.hyp_labels[j], {}};
    pair.counts = EditDistance(TextOf(refc, pair.ref), TextOf(hypc, pair.hyp));
    out.counts += pair.counts;
    out.pairs.push_back(std::move(pair));
  }
  if (static_cast<std::int64_t>(out.counts.distance()) != out.assignment.total_cost)
    throw std::logic_error("cpCER traceback disagrees with the assignment cost");
  out.rate = static_cast<double>(out.assignment.total_cost) / static_cast<double>(ref_len);
  return out;
}

RateResult SaCer(const SATranscript &ref, const SATranscript &hyp, const NormalizationPolicy &policy) {
  auto by_name = [&policy](const SATranscript &t) {
    SpeakerConcat out;
    for (const auto &u : t.utterances()) out[NfcNormalize(u.speaker)] += Normalize(u.text, policy);
    return out;
  };
  const SpeakerConcat refc = by_name(ref);
  const SpeakerConcat hypc = by_name(hyp);
  static const UnitSeq kEmpty;

  RateResult r;
  for (const auto &[name, text] : refc) {
    auto it = hypc.find(name);
    r.counts += EditDistance(text, it == hypc.end() ? kEmpty : it->second);
  }
  for (const auto &[name, text] : hypc) {
    if (!refc.contains(name)) r.counts += EditDistance(kEmpty, text);
  }
  r.rate = ErrorRate(r.counts);
  return r;
}

const char *ModeName(RegistrationMode mode) {
  switch (mode) {
    case RegistrationMode::kNoRegist: return "no-regist";
    case RegistrationMode::kMatchRegist: return "match-regist";
    case RegistrationMode::kOverRegist: return "over-regist";
  }
  return "?";
}

RegistrationMode ParseMode(const std::string &name) {
  if (name == "no-regist") return RegistrationMode::kNoRegist;
  if (name == "match-regist") return RegistrationMode::kMatchRegist;
  if (name == "over-regist") return RegistrationMode::kOverRegist;
  throw std::invalid_argument("unknown registration mode: " + name);
}

std::optional<double> ScoreReport::delta_cp() const {
  if (!cpcer) return std::nullopt;
  return DeltaCp(cer.rate(), cpcer->rate());
}

std::optional<double> ScoreReport::delta_sa() const {
  if (!sacer) return std::nullopt;
  return DeltaSa(cer.rate(), sacer->rate());
}

ScoreReport ScoreClip(const SATranscript &ref, const SATranscript &hyp, const NormalizationPolicy &policy,
                      RegistrationMode mode) {
  ScoreReport report;
  report.clip_id = ref.clip_id();
  report.cer.counts = ComputeCer(ref, hyp, policy).counts;
  if (mode == RegistrationMode::kNoRegist) {
    report.cpcer = MetricScore{CpCer(ref, Anonymize(hyp), policy).counts};
  } else {
    report.cpcer = MetricScore{CpCer(ref, hyp, policy).counts};
    report.sacer = MetricScore{SaCer(ref, hyp, policy).counts};
  }
  return report;
}

ScoreReport Aggregate(const std::vector<ScoreReport> &reports) {
  if (reports.empty()) throw std::invalid_argument("cannot aggregate an empty report list");
  std::vector<const ScoreReport *> sorted;
  for (const auto &r : reports) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ScoreReport *a, const ScoreReport *b) { return a->clip_id < b->clip_id; });

  const bool has_cp = sorted.front()->cpcer.has_value();
  const bool has_sa = sorted.front()->sacer.has_value();
  ScoreReport out;
  out.clip_id = "AGGREGATE";
  if (has_cp) out.cpcer.emplace();
  if (has_sa) out.sacer.emplace();
  for (const ScoreReport *r : sorted) {
    if (r->cpcer.has_value() != has_cp || r->sacer.has_value() != has_sa)
      throw std::invalid_argument("mixed metric availability across clips (clip " + r->clip_id + ")");
    out.cer.counts += r->cer.counts;
    if (has_cp) out.cpcer->counts += r->cpcer->counts;
    if (has_sa) out.sacer->counts += r->sacer->counts;
  }
  return out;
}

namespace {

ClipOutcome ScoreOne(const ClipPair &pair, const NormalizationPolicy &policy, RegistrationMode mode) {
  ClipOutcome outcome;
  outcome.clip_id = pair.ref.clip_id();
  try {
    outcome.report = ScoreClip(pair.ref, pair.hyp, policy, mode);
  } catch (const std::exception &e) {
    outcome.error = e.what();
  }
  return outcome;
}

void SortByClip(std::vector<ClipOutcome> &outcomes) {
  std::stable_sort(outcomes.begin(), outcomes.end(),
                   [](const ClipOutcome &a, const ClipOutcome &b) { return a.clip_id < b.clip_id; });
}

}  // namespace

std::vector<ClipOutcome> ScoreCorpus(const std::vector<ClipPair> &pairs, const NormalizationPolicy &policy,
                                     RegistrationMode mode, int jobs) {
  std::vector<ClipOutcome> outcomes(pairs.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  const auto n = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) outcomes[i] = ScoreOne(pairs[i], policy, mode);
  SortByClip(outcomes);
  return outcomes;
}

std::vector<ClipOutcome> ScoreCorpusSerial(const std::vector<ClipPair> &pairs,
                                           const NormalizationPolicy &policy, RegistrationMode mode) {
  std::vector<ClipOutcome> outcomes;
  outcomes.reserve(pairs.size());
  for (const auto &p : pairs) outcomes.push_back(ScoreOne(p, policy, mode));
  SortByClip(outcomes);
  return outcomes;
}

}  // namespace sdr
