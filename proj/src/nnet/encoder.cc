// src/nnet/encoder.cc

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

#include "tt/encoder.h"

#include <algorithm>
#include <optional>

namespace tt {

namespace {

// relu(W [x_{2j-2}; x_{2j-1}; x_{2j}] + b)
std::vector<float> ConvOutput(const ConvLayer &conv, const Frames &history,
                              std::span<const float> current) {
  const std::size_t in_dim = current.size();
  std::vector<float> stacked(kConvKernel * in_dim, 0.0f);
  std::copy(history[0].begin(), history[0].end(), stacked.begin());
  std::copy(history[1].begin(), history[1].end(), stacked.begin() + in_dim);
  std::copy(current.begin(), current.end(), stacked.begin() + 2 * in_dim);
  std::vector<float> out(conv.bias);
  AddMatVec(conv.weight, stacked, out);
  for (float &x : out) x = std::max(x, 0.0f);
  return out;
}

std::vector<float> DfsmnOutput(const DfsmnLayer &layer, const ModelConfig &c,
                               const Frames &proj, const Frames &input,
                               int64 t, int64 received) {
  const int64 ring = static_cast<int64>(proj.size());
  std::vector<float> memory(c.dfsmn_proj_dim, 0.0f);
  for (int32 i = -c.dfsmn_left; i <= c.dfsmn_right; ++i) {
    int64 s = t + i;
    if (s < 0 || s >= received) continue;
    std::span<const float> tap = layer.taps.Row(i + c.dfsmn_left);
    const std::vector<float> &p = proj[s % ring];
    for (int32 d = 0; d < c.dfsmn_proj_dim; ++d) memory[d] += tap[d] * p[d];
  }
  std::vector<float> out = layer.out_proj.Apply(memory);
  const std::vector<float> &skip = input[t % input.size()];
  for (std::size_t d = 0; d < out.size(); ++d)
    out[d] = std::max(out[d] + layer.bias[d], 0.0f) + skip[d];
  return out;
}

}  // namespace

EncoderState::EncoderState(const ModelConfig &config) : config_(config) {
  config_.Check();
  Reset();
}

void EncoderState::Reset() {
  conv_[0].history.assign(2, std::vector<float>(config_.feat_dim, 0.0f));
  conv_[1].history.assign(2, std::vector<float>(config_.feat_dim, 0.0f));
  conv_[0].consumed = conv_[1].consumed = 0;
  dfsmn_.assign(config_.num_dfsmn_layers, DfsmnBuffer());
  for (DfsmnBuffer &b : dfsmn_) {
    b.proj.assign(config_.memory_taps(),
                  std::vector<float>(config_.dfsmn_proj_dim, 0.0f));
    b.input.assign(config_.dfsmn_right + 1,
                   std::vector<float>(config_.encoder_dim, 0.0f));
  }
  frames_consumed_ = subsampled_frames_ = frames_emitted_ = 0;
  flushed_ = false;
}

namespace {

// Returns the subsampler output for this input if one is due.
std::optional<std::vector<float>> ConvPush(const ConvLayer &conv,
                                           Frames *history, int64 *consumed,
                                           std::span<const float> x) {
  std::optional<std::vector<float>> out;
  if (*consumed % kConvStride == 0) out = ConvOutput(conv, *history, x);
  (*history)[0] = std::move((*history)[1]);
  (*history)[1].assign(x.begin(), x.end());
  ++*consumed;
  return out;
}

std::optional<std::vector<float>> DfsmnPush(const DfsmnLayer &layer,
                                            const ModelConfig &c,
                                            EncoderState::DfsmnBuffer *buf,
                                            std::vector<float> x) {
  int64 t = buf->received++;
  buf->proj[t % buf->proj.size()] = layer.in_proj.Apply(x);
  buf->input[t % buf->input.size()] = std::move(x);
  int64 ready = t - c.dfsmn_right;
  if (ready < 0) return std::nullopt;
  buf->emitted = ready + 1;
  return DfsmnOutput(layer, c, buf->proj, buf->input, ready, buf->received);
}

}  // namespace

Frames EncoderPush(const TransducerModel &model, EncoderState *state,
                   std::span<const float> frame) {
  const ModelConfig &c = model.config;
  if (frame.size() != static_cast<std::size_t>(c.feat_dim))
    throw ShapeError("EncoderPush: frame has " + std::to_string(frame.size()) +
                     " dims, model expects " + std::to_string(c.feat_dim));
  if (state->flushed_) TT_ERR << "EncoderPush after EncoderFlush without Reset";
  ++state->frames_consumed_;

  auto &cv = state->conv_;
  auto first = ConvPush(model.subsampler[0], &cv[0].history, &cv[0].consumed,
                        frame);
  if (!first) return {};
  auto second = ConvPush(model.subsampler[1], &cv[1].history, &cv[1].consumed,
                         *first);
  if (!second) return {};
  ++state->subsampled_frames_;

  Frames carry{std::move(*second)};
  for (std::size_t l = 0; l < model.dfsmn.size() && !carry.empty(); ++l) {
    const DfsmnLayer &layer = model.dfsmn[l];
    auto &buf = state->dfsmn_[l];
    Frames next;
    for (std::vector<float> &x : carry)
      if (auto y = DfsmnPush(layer, c, &buf, std::move(x)))
        next.push_back(std::move(*y));
    carry = std::move(next);
  }
  state->frames_emitted_ += static_cast<int64>(carry.size());
  return carry;
}

Frames EncoderFlush(const TransducerModel &model, EncoderState *state) {
  const ModelConfig &c = model.config;
  if (state->flushed_) return {};
  state->flushed_ = true;
  Frames carry;
  for (std::size_t l = 0; l < model.dfsmn.size(); ++l) {
    const DfsmnLayer &layer = model.dfsmn[l];
    auto &buf = state->dfsmn_[l];
    Frames next;
    for (std::vector<float> &x : carry)
      if (auto y = DfsmnPush(layer, c, &buf, std::move(x)))
        next.push_back(std::move(*y));
    for (; buf.emitted < buf.received; ++buf.emitted)
      next.push_back(DfsmnOutput(layer, c, buf.proj, buf.input, buf.emitted,
                                 buf.received));
    carry = std::move(next);
  }
  state->frames_emitted_ += static_cast<int64>(carry.size());
  return carry;
}

Frames EncodeUtterance(const TransducerModel &model, const Frames &features) {
  EncoderState state(model.config);
  Frames out;
  for (const std::vector<float> &f : features)
    for (std::vector<float> &e : EncoderPush(model, &state, f))
      out.push_back(std::move(e));
  for (std::vector<float> &e : EncoderFlush(model, &state))
    out.push_back(std::move(e));
  return out;
}

}  // namespace tt
