// tt/metrics.h

// Copyright 2026  The tiny-transducer Authors

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

#ifndef TT_METRICS_H_
#define TT_METRICS_H_

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "tt/decoder.h"

namespace tt {

struct ErrorBreakdown {
  int64 substitutions = 0;
  int64 deletions = 0;
  int64 insertions = 0;
  int64 ref_length = 0;

  int64 errors() const { return substitutions + deletions + insertions; }
  bool wer_defined() const { return ref_length > 0; }
  // errors / ref_length; 0 when undefined.
  double wer() const;
  ErrorBreakdown &operator+=(const ErrorBreakdown &o);
  bool operator==(const ErrorBreakdown &) const = default;
};

// Unit-cost Levenshtein alignment. Among equally cheap alignments the
// backtrace prefers substitution (or match), then deletion, then insertion.
template <typename T>
ErrorBreakdown AlignAndCount(std::span<const T> ref, std::span<const T> hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  std::vector<int64> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> int64 & { return d[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = static_cast<int64>(i);
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = static_cast<int64>(j);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      at(i, j) = std::min({at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1),
                           at(i - 1, j) + 1, at(i, j - 1) + 1});
  ErrorBreakdown e;
  e.ref_length = static_cast<int64>(n);
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const int64 sub = ref[i - 1] == hyp[j - 1] ? 0 : 1;
      if (at(i, j) == at(i - 1, j - 1) + sub) {
        e.substitutions += sub;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ++e.deletions;
      --i;
    } else {
      ++e.insertions;
      --j;
    }
  }
  return e;
}

inline ErrorBreakdown AlignAndCount(const std::vector<std::string> &ref,
                                    const std::vector<std::string> &hyp) {
  return AlignAndCount<std::string>(std::span(ref), std::span(hyp));
}

struct SpeedReport {
  int64 num_utterances = 0;
  int64 frames_total = 0;
  int64 frames_skipped = 0;
  int64 wfst_steps = 0;
  double blank_rate = 0.0;  // frames_skipped / frames_total over all traces
  double step_ratio = 0.0;  // wfst_steps / frames_total
  double rtf = 0.0;         // (encoder + search time) / audio time
  double s_rtf = 0.0;       // search time / audio time
};

// Throws std::invalid_argument if audio_seconds <= 0.
SpeedReport MakeSpeedReport(std::span<const DecodeTrace> traces, double audio_seconds);

// Machine-readable "key=value" lines.
std::string FormatKeyValue(const ErrorBreakdown &e);
std::string FormatKeyValue(const SpeedReport &r);

// Columns padded to their widest cell, separated by two spaces.
std::string FormatTable(const std::vector<std::string> &header,
                        const std::vector<std::vector<std::string>> &rows);

}  // namespace tt

#endif  // TT_METRICS_H_
