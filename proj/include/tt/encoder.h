// tt/encoder.h

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

#ifndef TT_ENCODER_H_
#define TT_ENCODER_H_

#include <span>
#include <vector>

#include "tt/model.h"

namespace tt {

using Frames = std::vector<std::vector<float>>;

// Streaming state for the subsampler + DFSMN stack of one utterance.
//
// Each subsampling convolution is causal: its output j combines inputs
// 2j-2, 2j-1 and 2j (zero before the start), so it is emitted as soon as
// input 2j arrives. Each DFSMN layer holds back dfsmn_right frames of
// look-ahead, so after n subsampled frames the stack has emitted
// max(0, n - num_dfsmn_layers * dfsmn_right) encoder frames.
class EncoderState {
 public:
  explicit EncoderState(const ModelConfig &config);
  void Reset();

  int64 frames_consumed() const { return frames_consumed_; }
  int64 subsampled_frames() const { return subsampled_frames_; }
  int64 frames_emitted() const { return frames_emitted_; }

  struct ConvBuffer {
    Frames history;  // the two most recent inputs, oldest first
    int64 consumed = 0;
  };
  struct DfsmnBuffer {
    Frames proj;    // ring of memory_taps projected frames, slot = t % size
    Frames input;   // ring of dfsmn_right + 1 layer inputs for the skip path
    int64 received = 0;
    int64 emitted = 0;
  };

 private:
  friend Frames EncoderPush(const TransducerModel &, EncoderState *,
                            std::span<const float>);
  friend Frames EncoderFlush(const TransducerModel &, EncoderState *);

  ModelConfig config_;
  ConvBuffer conv_[2];
  std::vector<DfsmnBuffer> dfsmn_;
  int64 frames_consumed_ = 0;
  int64 subsampled_frames_ = 0;
  int64 frames_emitted_ = 0;
  bool flushed_ = false;
};

// Feeds one feature frame; returns the encoder frames that became ready
// (zero or more). Throws ShapeError if frame.size() != feat_dim.
Frames EncoderPush(const TransducerModel &model, EncoderState *state,
                   std::span<const float> frame);

// End of utterance: drains the frames held for right context, treating the
// future as zeros. The state must be Reset() before reuse.
Frames EncoderFlush(const TransducerModel &model, EncoderState *state);

// Convenience: push every frame then flush.
Frames EncodeUtterance(const TransducerModel &model, const Frames &features);

}  // namespace tt

#endif  // TT_ENCODER_H_
