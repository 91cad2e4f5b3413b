// tt/predictor.h

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

#ifndef TT_PREDICTOR_H_
#define TT_PREDICTOR_H_

#include <span>
#include <vector>

#include "tt/model.h"

namespace tt {

// The last M non-blank labels, oldest first. Starts as M copies of the
// reserved start-of-sequence id, whose embedding is the zero vector.
class PredictorState {
 public:
  explicit PredictorState(const ModelConfig &config);

  void Reset();
  // Shifts `label` in; blank and out-of-range labels are rejected.
  void Push(int32 label);

  const std::vector<int32> &history() const { return history_; }
  bool operator==(const PredictorState &) const = default;

 private:
  int32 sos_;
  int32 blank_;
  std::vector<int32> history_;
};

// h_pred = Conv1d(Embed(y_{u-M}, ..., y_{u-1})). Depends only on the
// history, so it may be cached per history.
std::vector<float> PredictorStep(const TransducerModel &model,
                                 const PredictorState &state);

// Softmax(out * tanh(enc * h_enc + pred * h_pred + bias) + out_bias), in
// double precision. Entries sum to one.
std::vector<double> JointStep(const TransducerModel &model,
                              std::span<const float> h_enc,
                              std::span<const float> h_pred);

}  // namespace tt

#endif  // TT_PREDICTOR_H_
