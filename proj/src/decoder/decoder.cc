// src/decoder/decoder.cc

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

#include "tt/decoder.h"

#include <chrono>
#include <cmath>
#include <sstream>

#include "tt/fst-ops.h"
#include "tt/matrix.h"
#include "tt/predictor.h"

namespace tt {

namespace {

int64 NanosSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

void DecodeParams::Check() const {
  if (!(beta_blank >= 0.0)) throw std::invalid_argument("beta_blank must be >= 0");
  if (!(gamma_blank > 0.0)) throw std::invalid_argument("gamma_blank must be > 0");
  if (!(beam > 0.0)) throw std::invalid_argument("beam must be > 0");
  if (max_active < 0) throw std::invalid_argument("max_active must be >= 0");
}

double BlankRate(const DecodeTrace &trace) {
  if (trace.frames_total == 0) return 0.0;
  return static_cast<double>(trace.frames_skipped) / trace.frames_total;
}

std::string FormatTrace(const DecodeTrace &trace) {
  std::ostringstream os;
  os << "frames_total=" << trace.frames_total << '\n'
     << "frames_skipped=" << trace.frames_skipped << '\n'
     << "wfst_steps=" << trace.wfst_steps << '\n'
     << "blank_rate=" << BlankRate(trace) << '\n'
     << "emitted_phones=" << trace.emitted_phones.size() << '\n'
     << "encoder_ns=" << trace.encoder_ns << '\n'
     << "search_ns=" << trace.search_ns << '\n';
  return os.str();
}

PosteriorFrame MakePosteriorFrame(int64 step, std::vector<double> log_scores,
                                  int32 blank_id) {
  if (blank_id < 0 || blank_id >= static_cast<int32>(log_scores.size()))
    throw ShapeError("posterior frame has no blank entry");
  PosteriorFrame f;
  f.step = step;
  f.blank_log_score = log_scores[blank_id];
  f.scores = std::move(log_scores);
  return f;
}

PosteriorFrame DeweightBlank(PosteriorFrame frame, int32 blank_id, double beta) {
  frame.scores[blank_id] -= beta;
  frame.blank_log_score = frame.scores[blank_id];
  return frame;
}

bool IsBlankFrame(const PosteriorFrame &frame, double gamma) {
  return frame.blank_log_score > std::log(gamma);
}

int32 GreedyLabel(const PosteriorFrame &frame) {
  int32 best = 0;
  for (int32 k = 1; k < static_cast<int32>(frame.scores.size()); ++k)
    if (frame.scores[k] > frame.scores[best]) best = k;
  return best;
}

void CheckGraphAlphabet(const Fst &graph, const ModelConfig &config) {
  for (const auto &[id, sym] : graph.isyms().Items()) {
    if (id == kEpsilon) continue;
    int32 label = id - 1;
    if (label >= config.num_labels || config.LabelName(label) != sym)
      throw AlphabetMismatch("graph input symbol '" + sym + "' (id " +
                             std::to_string(id) + ") is not model label '" +
                             config.LabelName(label) + "'");
  }
  for (StateId s = 0; s < graph.NumStates(); ++s)
    for (const Arc &a : graph.Arcs(s))
      if (a.ilabel != kEpsilon &&
          (a.ilabel > config.num_labels || a.ilabel - 1 == config.blank_id))
        throw AlphabetMismatch("graph input label " + std::to_string(a.ilabel) +
                               " is not a model phone");
}

FrameDecoder::FrameDecoder(const ModelConfig &config, const DecodeParams &params,
                           const Fst *graph, const PhonePrior *prior)
    : config_(config), params_(params), graph_(graph) {
  params_.Check();
  prior_ = prior ? *prior : PhonePrior::Uniform(config.num_labels);
  if (static_cast<int32>(prior_.log_prior.size()) != config.num_labels)
    throw ShapeError("phone prior size does not match the label count");
  if (graph_) {
    CheckGraphAlphabet(*graph_, config_);
    tokens_ = InitialTokens(*graph_);
  }
}

int32 FrameDecoder::Accept(std::vector<double> log_scores) {
  if (static_cast<int32>(log_scores.size()) != config_.num_labels)
    throw ShapeError("frame has " + std::to_string(log_scores.size()) +
                     " scores, expected " + std::to_string(config_.num_labels));
  PosteriorFrame frame = DeweightBlank(
      MakePosteriorFrame(trace_.frames_total, std::move(log_scores), config_.blank_id),
      config_.blank_id, params_.beta_blank);
  const int32 y = GreedyLabel(frame);
  if (y != config_.blank_id) trace_.emitted_phones.push_back(y);
  ++trace_.frames_total;
  if (IsBlankFrame(frame, params_.gamma_blank)) {
    ++trace_.frames_skipped;
    return y;
  }
  ++trace_.wfst_steps;
  if (graph_) {
    auto start = std::chrono::steady_clock::now();
    tokens_ = BeamSearchStep(*graph_, tokens_, frame, prior_,
                             {params_.beam, params_.max_active});
    trace_.search_ns += NanosSince(start);
  } else if (y != config_.blank_id) {
    greedy_output_.push_back(y);
  }
  return y;
}

DecodeResult FrameDecoder::Finish() {
  DecodeResult r;
  r.trace = trace_;
  if (trace_.frames_total == 0) return r;
  if (graph_) {
    auto start = std::chrono::steady_clock::now();
    Hypothesis h = BestPath(*graph_, tokens_);
    r.trace.search_ns += NanosSince(start);
    r.cost = h.cost;
    r.ids = std::move(h.olabels);
    for (int32 id : r.ids) {
      std::string w = graph_->osyms().Find(id);
      r.tokens.push_back(w.empty() ? std::to_string(id) : w);
    }
  } else {
    r.ids = greedy_output_;
    for (int32 id : r.ids) r.tokens.push_back(config_.LabelName(id));
  }
  return r;
}

DecodeResult DecodeUtterance(const TransducerModel &model, const Frames &features,
                             const DecodeParams &params, const Fst *graph,
                             const PhonePrior *prior) {
  const ModelConfig &c = model.config;
  FrameDecoder decoder(c, params, graph, prior);
  EncoderState enc(c);
  PredictorState pred(c);
  int64 encoder_ns = 0;
  auto start = std::chrono::steady_clock::now();
  std::vector<float> h_pred = PredictorStep(model, pred);

  auto consume = [&](const Frames &encoded) {
    for (const std::vector<float> &h_enc : encoded) {
      std::vector<double> scores = LogScores(JointStep(model, h_enc, h_pred));
      encoder_ns += NanosSince(start);
      int32 y = decoder.Accept(std::move(scores));
      start = std::chrono::steady_clock::now();
      if (y != c.blank_id) {
        pred.Push(y);
        h_pred = PredictorStep(model, pred);
      }
    }
  };
  for (const std::vector<float> &frame : features) {
    if (static_cast<int32>(frame.size()) != c.feat_dim)
      throw ShapeError("feature frame has " + std::to_string(frame.size()) +
                       " values, expected " + std::to_string(c.feat_dim));
    consume(EncoderPush(model, &enc, frame));
  }
  consume(EncoderFlush(model, &enc));
  encoder_ns += NanosSince(start);
  DecodeResult r = decoder.Finish();
  r.trace.encoder_ns = encoder_ns;
  return r;
}

DecodeResult DecodePosteriors(const ModelConfig &config,
                              const std::vector<std::vector<double>> &log_scores,
                              const DecodeParams &params, const Fst *graph,
                              const PhonePrior *prior) {
  FrameDecoder decoder(config, params, graph, prior);
  for (const auto &frame : log_scores) decoder.Accept(frame);
  return decoder.Finish();
}

}  // namespace tt
