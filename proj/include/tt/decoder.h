// tt/decoder.h

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

#ifndef TT_DECODER_H_
#define TT_DECODER_H_

#include <optional>
#include <string>
#include <vector>

#include "tt/encoder.h"
#include "tt/fst.h"
#include "tt/model.h"
#include "tt/search.h"

namespace tt {

struct DecodeParams {
  // Subtracted from the blank log-score of every frame.
  double beta_blank = 2.0;
  // Frames whose deweighted blank probability exceeds this are skipped.
  // Any value above 1 disables skipping (frame-synchronous decoding).
  double gamma_blank = 0.95;
  double beam = 16.0;
  int32 max_active = 7000;

  static constexpr double kFsdGamma = 2.0;

  // Throws std::invalid_argument on beta < 0, beam <= 0, gamma <= 0 or
  // max_active < 0.
  void Check() const;
  bool frame_synchronous() const { return gamma_blank > 1.0; }
};

struct DecodeTrace {
  std::vector<int32> emitted_phones;  // greedy non-blank labels
  int64 frames_total = 0;
  int64 frames_skipped = 0;
  int64 wfst_steps = 0;
  int64 encoder_ns = 0;  // encoder, predictor and joint
  int64 search_ns = 0;
};

// frames_skipped / frames_total; 0 for an empty trace.
double BlankRate(const DecodeTrace &trace);

// Key=value lines: frames_total, frames_skipped, wfst_steps, blank_rate,
// emitted_phones, encoder_ns, search_ns.
std::string FormatTrace(const DecodeTrace &trace);

PosteriorFrame MakePosteriorFrame(int64 step, std::vector<double> log_scores,
                                  int32 blank_id);

// Lowers the blank log-score by `beta`; other entries are untouched.
PosteriorFrame DeweightBlank(PosteriorFrame frame, int32 blank_id, double beta);

// True when the (already deweighted) blank score exceeds log(gamma).
bool IsBlankFrame(const PosteriorFrame &frame, double gamma);

// Highest-scoring label; the lowest index wins ties.
int32 GreedyLabel(const PosteriorFrame &frame);

struct DecodeResult {
  // Word ids of the graph output, or greedy phone labels without a graph.
  std::vector<int32> ids;
  std::vector<std::string> tokens;
  double cost = 0.0;  // search cost; 0 without a graph
  DecodeTrace trace;
};

// Throws AlphabetMismatch unless every input symbol of `graph` names the
// matching model label (graph id l = label l - 1) and no arc carries blank.
void CheckGraphAlphabet(const Fst &graph, const ModelConfig &config);

// Per-frame half of the decoding loop, fed with joint log-scores: deweights
// blank, picks the greedy label, skips blank frames and advances the search
// on the rest. Works without a model, so posteriors may be synthetic.
class FrameDecoder {
 public:
  // `graph` and `prior` may be null and must outlive the decoder.
  FrameDecoder(const ModelConfig &config, const DecodeParams &params,
               const Fst *graph, const PhonePrior *prior);

  // Returns the greedy label of the deweighted frame.
  int32 Accept(std::vector<double> log_scores);
  // Throws NoHypothesisError when the search ends outside a final state.
  DecodeResult Finish();

  const DecodeTrace &trace() const { return trace_; }

 private:
  ModelConfig config_;
  DecodeParams params_;
  const Fst *graph_;
  PhonePrior prior_;
  TokenSet tokens_;
  std::vector<int32> greedy_output_;
  DecodeTrace trace_;
};

// Streaming decode of one utterance: the encoder runs frame by frame, the
// predictor advances on every greedy non-blank label (at most one per
// frame) and FrameDecoder handles the rest. Empty input gives an empty
// result with a zero trace.
DecodeResult DecodeUtterance(const TransducerModel &model, const Frames &features,
                             const DecodeParams &params, const Fst *graph,
                             const PhonePrior *prior = nullptr);

// Decodes precomputed per-frame log-scores, bypassing the networks.
DecodeResult DecodePosteriors(const ModelConfig &config,
                              const std::vector<std::vector<double>> &log_scores,
                              const DecodeParams &params, const Fst *graph,
                              const PhonePrior *prior = nullptr);

// Text: one frame per line, values separated by spaces. Binary:
// little-endian f32, frame-major. The binary form needs `feat_dim`.
Frames ReadFeaturesText(std::istream &is);
Frames ReadFeaturesBinary(std::istream &is, int32 feat_dim);
void WriteFeaturesText(const Frames &frames, std::ostream &os);
void WriteFeaturesBinary(const Frames &frames, std::ostream &os);
// Picks the text reader for a ".txt" suffix, binary otherwise. Checks
// that every frame has `feat_dim` values.
Frames ReadFeatureFile(const std::string &path, int32 feat_dim);

}  // namespace tt

#endif  // TT_DECODER_H_
