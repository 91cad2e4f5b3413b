// tt/model.h

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

#ifndef TT_MODEL_H_
#define TT_MODEL_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tt/matrix.h"

namespace tt {

// Topology of the transducer. Defaults are the "Small" configuration: 8
// DFSMN layers of width 400 with 8 left / 2 right memory frames, joint
// width 100, a 4-label predictor context and 210 phones plus blank.
struct ModelConfig {
  int32 feat_dim = 40;
  int32 encoder_dim = 400;
  int32 num_dfsmn_layers = 8;
  int32 dfsmn_left = 8;
  int32 dfsmn_right = 2;
  int32 dfsmn_proj_dim = 216;
  int32 joint_dim = 100;
  int32 embed_dim = 100;
  int32 pred_dim = 100;
  int32 predictor_context = 4;
  int32 num_labels = 211;
  int32 blank_id = 0;
  int32 subsample_factor = 4;
  // Optional label names in label-id order; empty means "p<id>" / "<blk>".
  std::vector<std::string> phones;

  // Throws std::invalid_argument describing the first violated constraint.
  void Check() const;

  int32 memory_taps() const { return dfsmn_left + 1 + dfsmn_right; }
  int32 total_lookahead() const { return num_dfsmn_layers * dfsmn_right; }
  // Reserved start-of-sequence id; embeds to the zero vector.
  int32 sos_id() const { return num_labels; }
  std::string LabelName(int32 label) const;

  bool operator==(const ModelConfig &) const = default;
};

// Time kernel width and stride of each subsampling convolution.
inline constexpr int32 kConvKernel = 3;
inline constexpr int32 kConvStride = 2;

// Symmetric int8 storage with one f32 scale per output row:
// w(r, c) ~= scales[r] * q[r * cols + c], scales[r] = max|row r| / 127.
struct QuantizedMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> scales;
  std::vector<std::int8_t> q;

  static QuantizedMatrix Quantize(const Matrix &m);
  Matrix Dequantize() const;
  bool operator==(const QuantizedMatrix &) const = default;
};

// A weight matrix held either as f32 or as int8.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  WeightMatrix(Matrix m) : w_(std::move(m)) {}
  WeightMatrix(QuantizedMatrix q) : w_(std::move(q)) {}

  std::size_t rows() const;
  std::size_t cols() const;
  bool quantized() const { return std::holds_alternative<QuantizedMatrix>(w_); }
  const Matrix &dense() const { return std::get<Matrix>(w_); }
  const QuantizedMatrix &quant() const { return std::get<QuantizedMatrix>(w_); }

  // out = W * in.
  void Apply(std::span<const float> in, std::span<float> out) const;
  Matrix ToDense() const;

  bool operator==(const WeightMatrix &) const = default;

 private:
  std::variant<Matrix, QuantizedMatrix> w_;
};

// y = W x, or y = A (B x) once the layer has been factorized.
class Linear {
 public:
  Linear() = default;
  explicit Linear(WeightMatrix w) { factors_.push_back(std::move(w)); }
  Linear(WeightMatrix a, WeightMatrix b);

  std::size_t rows() const { return factors_.front().rows(); }
  std::size_t cols() const { return factors_.back().cols(); }
  bool factored() const { return factors_.size() == 2; }
  std::size_t rank() const { return factored() ? factors_[1].rows() : 0; }

  const std::vector<WeightMatrix> &factors() const { return factors_; }
  std::vector<WeightMatrix> &factors() { return factors_; }

  void Apply(std::span<const float> in, std::span<float> out) const;
  std::vector<float> Apply(std::span<const float> in) const;
  // Product of the factors, dequantized.
  Matrix ToDense() const;
  std::int64_t NumParameters() const;

  bool operator==(const Linear &) const = default;

 private:
  std::vector<WeightMatrix> factors_;
};

// Time convolution, weight is out x (kConvKernel * in) with the input taps
// laid out oldest first.
struct ConvLayer {
  Matrix weight;
  std::vector<float> bias;
  bool operator==(const ConvLayer &) const = default;
};

// p_t = in_proj x_t
// m_t = sum_{i=-left}^{right} taps(i + left) .* p_{t+i}
// y_t = relu(out_proj m_t + bias) + x_t
struct DfsmnLayer {
  Linear in_proj;   // proj_dim x encoder_dim
  Matrix taps;      // memory_taps x proj_dim
  Linear out_proj;  // encoder_dim x proj_dim
  std::vector<float> bias;
  bool operator==(const DfsmnLayer &) const = default;
};

struct JointNetwork {
  Linear enc;   // joint_dim x encoder_dim
  Linear pred;  // joint_dim x pred_dim
  std::vector<float> bias;
  Linear out;   // num_labels x joint_dim
  std::vector<float> out_bias;
  bool operator==(const JointNetwork &) const = default;
};

struct TransducerModel {
  ModelConfig config;
  std::array<ConvLayer, 2> subsampler;  // feat->feat, feat->encoder
  std::vector<DfsmnLayer> dfsmn;
  Matrix embedding;                      // num_labels x embed_dim
  Matrix predictor;                      // pred_dim x (M * embed_dim)
  std::vector<float> predictor_bias;
  JointNetwork joint;

  // All-zero weights with shapes matching `config`.
  static TransducerModel Zeros(const ModelConfig &config);

  // Checks every weight shape against the config and that all weights are
  // finite; throws ShapeError / DomainError.
  void Validate() const;
  std::int64_t NumParameters() const;

  bool operator==(const TransducerModel &) const = default;
};

// Visits every Linear in the model together with its canonical name
// ("dfsmn.3.in_proj", "joint.out", ...).
template <typename Model, typename Fn>
void ForEachLinear(Model &model, Fn &&fn) {
  for (std::size_t l = 0; l < model.dfsmn.size(); ++l) {
    std::string base = "dfsmn." + std::to_string(l);
    fn(base + ".in_proj", model.dfsmn[l].in_proj);
    fn(base + ".out_proj", model.dfsmn[l].out_proj);
  }
  fn(std::string("joint.enc"), model.joint.enc);
  fn(std::string("joint.pred"), model.joint.pred);
  fn(std::string("joint.out"), model.joint.out);
}

}  // namespace tt

#endif  // TT_MODEL_H_
