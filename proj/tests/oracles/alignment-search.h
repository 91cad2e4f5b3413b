// tests/oracles/alignment-search.h

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

#ifndef TT_TESTS_ORACLES_ALIGNMENT_SEARCH_H_
#define TT_TESTS_ORACLES_ALIGNMENT_SEARCH_H_

// Exhaustive decoding reference: every per-frame label sequence is scored,
// collapsed to its phone string and joined with the graph's enumerated
// relation. Exponential in the number of frames.

#include <limits>
#include <vector>

#include "oracles/fst-enumerate.h"
#include "tt/search.h"

namespace tt::oracle {

struct ExhaustiveResult {
  double cost = std::numeric_limits<double>::infinity();
  LabelSeq olabels;
  int num_optimal = 0;  // hypotheses within 1e-9 of the best cost
};

// `graph_rel` must hold every accepted pair with input length up to the
// number of frames. Graph input label l means model label l - 1.
inline ExhaustiveResult ExhaustiveDecode(const Relation &graph_rel,
                                         const std::vector<PosteriorFrame> &frames,
                                         int32 blank, const PhonePrior &prior) {
  const int32 n = static_cast<int32>(frames.front().scores.size());
  std::map<LabelSeq, double> acoustic;  // graph input string -> best cost
  std::vector<int32> y(frames.size(), 0);
  while (true) {
    double c = 0.0;
    LabelSeq phones;
    for (std::size_t t = 0; t < frames.size(); ++t) {
      if (y[t] == blank) {
        c -= frames[t].blank_log_score;
      } else {
        c += -frames[t].scores[y[t]] + prior.log_prior[y[t]];
        phones.push_back(y[t] + 1);
      }
    }
    auto it = acoustic.find(phones);
    if (it == acoustic.end() || c < it->second) acoustic[phones] = c;
    std::size_t t = 0;
    while (t < y.size() && ++y[t] == n) y[t++] = 0;
    if (t == y.size()) break;
  }
  ExhaustiveResult best;
  std::vector<double> all;
  for (const auto &[k, w] : graph_rel) {
    auto it = acoustic.find(k.first);
    if (it == acoustic.end()) continue;
    double c = w + it->second;
    all.push_back(c);
    if (c < best.cost) {
      best.cost = c;
      best.olabels = k.second;
    }
  }
  for (double c : all)
    if (c <= best.cost + 1e-9) ++best.num_optimal;
  return best;
}

}  // namespace tt::oracle

#endif  // TT_TESTS_ORACLES_ALIGNMENT_SEARCH_H_
