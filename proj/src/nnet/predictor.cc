// src/nnet/predictor.cc

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

#include "tt/predictor.h"

#include <cmath>

namespace tt {

PredictorState::PredictorState(const ModelConfig &config)
    : sos_(config.sos_id()), blank_(config.blank_id) {
  history_.assign(config.predictor_context, sos_);
}

void PredictorState::Reset() { history_.assign(history_.size(), sos_); }

void PredictorState::Push(int32 label) {
  if (label == blank_ || label < 0 || label >= sos_)
    TT_ERR << "PredictorState::Push: invalid label " << label;
  history_.erase(history_.begin());
  history_.push_back(label);
}

std::vector<float> PredictorStep(const TransducerModel &model,
                                 const PredictorState &state) {
  const ModelConfig &c = model.config;
  std::vector<float> stacked(c.predictor_context * c.embed_dim, 0.0f);
  const std::vector<int32> &hist = state.history();
  for (std::size_t i = 0; i < hist.size(); ++i) {
    if (hist[i] == c.sos_id()) continue;
    std::span<const float> e = model.embedding.Row(hist[i]);
    std::copy(e.begin(), e.end(), stacked.begin() + i * c.embed_dim);
  }
  std::vector<float> out(model.predictor_bias);
  AddMatVec(model.predictor, stacked, out);
  return out;
}

std::vector<double> JointStep(const TransducerModel &model,
                              std::span<const float> h_enc,
                              std::span<const float> h_pred) {
  const JointNetwork &j = model.joint;
  if (h_enc.size() != j.enc.cols() || h_pred.size() != j.pred.cols())
    throw ShapeError("JointStep: encoder/predictor vector size mismatch");
  std::vector<float> hidden = j.enc.Apply(h_enc);
  std::vector<float> from_pred = j.pred.Apply(h_pred);
  for (std::size_t i = 0; i < hidden.size(); ++i)
    hidden[i] = std::tanh(hidden[i] + from_pred[i] + j.bias[i]);
  std::vector<float> logits = j.out.Apply(hidden);
  std::vector<double> scores(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i)
    scores[i] = static_cast<double>(logits[i]) + j.out_bias[i];
  return Softmax(scores);
}

}  // namespace tt
