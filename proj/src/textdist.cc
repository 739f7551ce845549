// src/textdist.cc

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

#include "sdr/textdist.h"

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <unicode/uchar.h>

#include "sdr/unicode.h"

namespace sdr {

namespace {

char32_t UnifyWidth(char32_t c) {
  if (c >= 0xFF01 && c <= 0xFF5E) return c - 0xFEE0;
  if (c == 0x3000) return 0x20;
  switch (c) {
    case 0xFFE0: return 0x00A2;
    case 0xFFE1: return 0x00A3;
    case 0xFFE2: return 0x00AC;
    case 0xFFE3: return 0x00AF;
    case 0xFFE4: return 0x00A6;
    case 0xFFE5: return 0x00A5;
    case 0xFFE6: return 0x20A9;
    default: return c;
  }
}

// Row-major (pattern word, symbol) match masks for one pattern string.
class PatternMasks {
 public:
  explicit PatternMasks(UnitView pattern) : words_((pattern.size() + 63) / 64) {
    ascii_.fill(-1);
    for (std::size_t i = 0; i < pattern.size(); ++i) {
      std::size_t slot = SlotFor(pattern[i]);
      masks_[slot * words_ + i / 64] |= std::uint64_t{1} << (i % 64);
    }
  }

  std::size_t words() const { return words_; }

  // Null when the symbol does not occur in the pattern.
  const std::uint64_t *Lookup(char32_t c) const {
    std::int32_t slot = -1;
    if (c < 128) {
      slot = ascii_[c];
    } else {
      auto it = other_.find(c);
      if (it != other_.end()) slot = it->second;
    }
    return slot < 0 ? nullptr : masks_.data() + static_cast<std::size_t>(slot) * words_;
  }

 private:
  std::size_t SlotFor(char32_t c) {
    std::int32_t *slot;
    if (c < 128) {
      slot = &ascii_[c];
    } else {
      auto [it, inserted] = other_.try_emplace(c, -1);
      slot = &it->second;
    }
    if (*slot < 0) {
      *slot = static_cast<std::int32_t>(masks_.size() / words_);
      masks_.resize(masks_.size() + words_, 0);
    }
    return static_cast<std::size_t>(*slot);
  }

  std::size_t words_;
  std::array<std::int32_t, 128> ascii_;
  std::unordered_map<char32_t, std::int32_t> other_;
  std::vector<std::uint64_t> masks_;
};

enum : std::uint8_t { kDiag = 0, kDel = 1, kIns = 2 };

}  // namespace

std::string NormalizationPolicy::Describe() const {
  std::string out;
  auto add = [&out](bool on, const char *name) {
    if (!on) return;
    if (!out.empty()) out += ',';
    out += name;
  };
  add(unify_width, "unify_width");
  add(casefold, "casefold");
  add(strip_punctuation, "strip_punctuation");
  add(strip_whitespace, "strip_whitespace");
  return out.empty() ? "identity" : out;
}

UnitSeq Normalize(std::string_view utf8_text, const NormalizationPolicy &policy) {
  UnitSeq units = DecodeUtf8(utf8_text);
  UnitSeq out;
  out.reserve(units.size());
  for (char32_t c : units) {
    if (policy.unify_width) c = UnifyWidth(c);
    if (policy.casefold) c = static_cast<char32_t>(u_foldCase(static_cast<UChar32>(c), U_FOLD_CASE_DEFAULT));
    if (policy.strip_punctuation && u_ispunct(static_cast<UChar32>(c))) continue;
    if (policy.strip_whitespace && u_isUWhiteSpace(static_cast<UChar32>(c))) continue;
    out.push_back(c);
  }
  return out;
}

EditCounts EditDistance(UnitView ref, UnitView hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  EditCounts counts;
  counts.reference_length = n;
  if (n == 0 || m == 0) {
    counts.deletions = n;
    counts.insertions = m;
    return counts;
  }

  const std::size_t width = m + 1;
  std::vector<std::uint8_t> back((n + 1) * width);
  // Cells hold (cost, substitutions); among cost-minimal paths keep the one
  // with the most substitutions, which makes the breakdown symmetric.
  struct Cell {
    std::size_t cost, subs;
    bool operator<(const Cell &o) const { return cost < o.cost || (cost == o.cost && subs > o.subs); }
  };
  std::vector<Cell> prev(width), cur(width);
  for (std::size_t j = 0; j <= m; ++j) {
    prev[j] = {j, 0};
    back[j] = kIns;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = {i, 0};
    back[i * width] = kDel;
    for (std::size_t j = 1; j <= m; ++j) {
      const bool sub = ref[i - 1] != hyp[j - 1];
      const Cell diag{prev[j - 1].cost + sub, prev[j - 1].subs + sub};
      const Cell del{prev[j].cost + 1, prev[j].subs};
      const Cell ins{cur[j - 1].cost + 1, cur[j - 1].subs};
      Cell best = diag;
      std::uint8_t dir = kDiag;
      if (del < best) {
        best = del;
        dir = kDel;
      }
      if (ins < best) {
        best = ins;
        dir = kIns;
      }
      cur[j] = best;
      back[i * width + j] = dir;
    }
    std::swap(prev, cur);
  }

  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    switch (back[i * width + j]) {
      case kDiag:
        if (ref[i - 1] != hyp[j - 1]) ++counts.substitutions;
        --i;
        --j;
        break;
      case kDel:
        ++counts.deletions;
        --i;
        break;
      default:
        ++counts.insertions;
        --j;
        break;
    }
  }
  return counts;
}

std::size_t Levenshtein(UnitView a, UnitView b) {
  if (a.size() > b.size()) std::swap(a, b);
  const UnitView pattern = a, text = b;
  const std::size_t m = pattern.size();
  if (m == 0) return text.size();

  PatternMasks peq(pattern);
  const std::size_t words = peq.words();
  const std::uint64_t last_bit = std::uint64_t{1} << ((m - 1) % 64);
  std::vector<std::uint64_t> vp(words, ~std::uint64_t{0}), vn(words, 0);
  std::size_t score = m;

  for (char32_t c : text) {
    const std::uint64_t *eq_row = peq.Lookup(c);
    // Horizontal delta entering the block from above: +1 on the top row.
    int carry = 1;
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t eq = eq_row ? eq_row[w] : 0;
      const std::uint64_t pv = vp[w], mv = vn[w];
      const std::uint64_t xv = eq | mv;
      if (carry < 0) eq |= 1;
      const std::uint64_t xh = (((eq & pv) + pv) ^ pv) | eq;
      std::uint64_t ph = mv | ~(xh | pv);
      std::uint64_t mh = pv & xh;

      const std::uint64_t high = (w + 1 == words) ? last_bit : (std::uint64_t{1} << 63);
      int out = 0;
      if (ph & high) out = 1;
      else if (mh & high) out = -1;

      ph <<= 1;
      mh <<= 1;
      if (carry < 0) mh |= 1;
      else if (carry > 0) ph |= 1;
      vp[w] = mh | ~(xv | ph);
      vn[w] = ph & xv;
      carry = out;
    }
    score = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(score) + carry);
  }
  return score;
}

double ErrorRate(const EditCounts &counts) {
  if (counts.reference_length == 0) throw std::domain_error("undefined rate");
  return static_cast<double>(counts.distance()) / static_cast<double>(counts.reference_length);
}

double Cer(UnitView ref, UnitView hyp) { return ErrorRate(EditDistance(ref, hyp)); }

}  // namespace sdr
