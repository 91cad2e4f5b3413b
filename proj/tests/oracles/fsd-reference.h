// tests/oracles/fsd-reference.h

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

#ifndef TT_TESTS_ORACLES_FSD_REFERENCE_H_
#define TT_TESTS_ORACLES_FSD_REFERENCE_H_

// Plain frame-synchronous transducer decoding written as one direct loop
// over the whole utterance: encode everything, then for every encoder frame
// score the joint, lower blank by beta, take the argmax, update the label
// history and advance the search. No skipping logic is involved.

#include <cmath>
#include <string>
#include <vector>

#include "tt/encoder.h"
#include "tt/predictor.h"
#include "tt/search.h"

namespace tt::oracle {

struct FsdOutput {
  std::vector<int32> greedy;  // non-blank argmax labels
  std::vector<int32> words;   // search output, empty without a graph
};

inline FsdOutput FsdReference(const TransducerModel &model, const Frames &features,
                              double beta, const Fst *graph, double beam,
                              int32 max_active) {
  const ModelConfig &c = model.config;
  FsdOutput out;
  Frames encoded = EncodeUtterance(model, features);
  PredictorState history(c);
  TokenSet tokens;
  if (graph) tokens = InitialTokens(*graph);
  const PhonePrior prior = PhonePrior::Uniform(c.num_labels);
  for (std::size_t t = 0; t < encoded.size(); ++t) {
    std::vector<double> p = JointStep(model, encoded[t], PredictorStep(model, history));
    PosteriorFrame f;
    f.step = static_cast<int64>(t);
    for (double x : p) f.scores.push_back(std::log(x));
    f.scores[c.blank_id] -= beta;
    f.blank_log_score = f.scores[c.blank_id];
    int32 best = 0;
    for (int32 k = 1; k < c.num_labels; ++k)
      if (f.scores[k] > f.scores[best]) best = k;
    if (best != c.blank_id) {
      out.greedy.push_back(best);
      history.Push(best);
    }
    if (graph) tokens = BeamSearchStep(*graph, tokens, f, prior, {beam, max_active});
  }
  if (graph && !encoded.empty()) out.words = BestPath(*graph, tokens).olabels;
  return out;
}

}  // namespace tt::oracle

#endif  // TT_TESTS_ORACLES_FSD_REFERENCE_H_
