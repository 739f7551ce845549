// include/sdr/textdist.h

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

#ifndef SDR_TEXTDIST_H_
#define SDR_TEXTDIST_H_

#include <cstddef>
#include <string>
#include <string_view>

namespace sdr {

// One character unit = one Unicode scalar value.
using UnitSeq = std::u32string;
using UnitView = std::u32string_view;

// Text normalization applied before scoring. Steps run in a fixed order:
// unify_width, casefold, strip_punctuation, strip_whitespace.
struct NormalizationPolicy {
  bool strip_whitespace = false;
  bool strip_punctuation = false;
  bool unify_width = false;
  bool casefold = false;

  // Whitespace stripped, everything else untouched. Mandarin references carry
  // no meaningful spaces.
  static NormalizationPolicy ScoringDefault() { return {true, false, false, false}; }
  static NormalizationPolicy Identity() { return {}; }

  std::string Describe() const;

  friend bool operator==(const NormalizationPolicy &, const NormalizationPolicy &) = default;
};

struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t reference_length = 0;

  std::size_t distance() const { return substitutions + deletions + insertions; }

  EditCounts &operator+=(const EditCounts &o) {
    substitutions += o.substitutions;
    deletions += o.deletions;
    insertions += o.insertions;
    reference_length += o.reference_length;
    return *this;
  }
  friend bool operator==(const EditCounts &, const EditCounts &) = default;
};

UnitSeq Normalize(std::string_view utf8_text, const NormalizationPolicy &policy);

// Minimal unit-cost alignment with operation counts. Among the cost-minimal
// alignments the traceback prefers substitution (or match), then deletion,
// then insertion. O(|ref|*|hyp|) time, one byte per cell for the traceback.
EditCounts EditDistance(UnitView ref, UnitView hyp);

// Distance only, bit-parallel over 64-unit blocks of the shorter sequence.
// O(ceil(m/64) * n) time.
std::size_t Levenshtein(UnitView a, UnitView b);

// (S + D + I) / reference_length. Throws std::domain_error("undefined rate")
// when reference_length is zero.
double ErrorRate(const EditCounts &counts);
double Cer(UnitView ref, UnitView hyp);

}  // namespace sdr

#endif  // SDR_TEXTDIST_H_
