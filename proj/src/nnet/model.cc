// src/nnet/model.cc

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

#include "tt/model.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tt {

namespace {

void Require(bool cond, const std::string &what) {
  if (!cond) throw std::invalid_argument("ModelConfig: " + what);
}

void CheckShape(const Matrix &m, std::size_t rows, std::size_t cols,
                const std::string &name) {
  if (m.rows() != rows || m.cols() != cols)
    throw ShapeError(name + ": expected " + std::to_string(rows) + "x" +
                     std::to_string(cols) + ", got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

void CheckShape(const Linear &l, std::size_t rows, std::size_t cols,
                const std::string &name) {
  if (l.factors().empty() || l.factors().size() > 2)
    throw ShapeError(name + ": bad factor count");
  if (l.rows() != rows || l.cols() != cols)
    throw ShapeError(name + ": expected " + std::to_string(rows) + "x" +
                     std::to_string(cols) + ", got " +
                     std::to_string(l.rows()) + "x" + std::to_string(l.cols()));
  if (l.factored() && l.factors()[0].cols() != l.factors()[1].rows())
    throw ShapeError(name + ": factor inner dimensions differ");
}

void CheckShape(const std::vector<float> &v, std::size_t n,
                const std::string &name) {
  if (v.size() != n)
    throw ShapeError(name + ": expected length " + std::to_string(n) +
                     ", got " + std::to_string(v.size()));
}

void CheckFinite(std::span<const float> v, const std::string &name) {
  for (float x : v)
    if (!std::isfinite(x)) throw DomainError(name + ": non-finite weight");
}

void CheckFinite(const Linear &l, const std::string &name) {
  for (const WeightMatrix &w : l.factors()) {
    if (w.quantized())
      CheckFinite(w.quant().scales, name);
    else
      CheckFinite(w.dense().data(), name);
  }
}

}  // namespace

void ModelConfig::Check() const {
  Require(feat_dim > 0, "feat_dim must be positive");
  Require(encoder_dim > 0, "encoder_dim must be positive");
  Require(num_dfsmn_layers >= 0, "num_dfsmn_layers must be >= 0");
  Require(dfsmn_left >= 0 && dfsmn_right >= 0, "dfsmn context must be >= 0");
  Require(dfsmn_proj_dim > 0, "dfsmn_proj_dim must be positive");
  Require(joint_dim > 0 && embed_dim > 0 && pred_dim > 0,
          "joint/embed/pred dims must be positive");
  Require(predictor_context >= 1, "predictor_context must be >= 1");
  Require(num_labels >= 2, "num_labels must be >= 2");
  Require(blank_id >= 0 && blank_id < num_labels, "blank_id out of range");
  Require(subsample_factor == kConvStride * kConvStride,
          "subsample_factor must be 4");
  Require(phones.empty() ||
              phones.size() == static_cast<std::size_t>(num_labels),
          "phones must list every label");
}

std::string ModelConfig::LabelName(int32 label) const {
  if (!phones.empty() && label >= 0 && label < num_labels) return phones[label];
  if (label == blank_id) return "<blk>";
  if (label == sos_id()) return "<sos>";
  return "p" + std::to_string(label);
}

QuantizedMatrix QuantizedMatrix::Quantize(const Matrix &m) {
  QuantizedMatrix out;
  out.rows = m.rows();
  out.cols = m.cols();
  out.scales.resize(m.rows());
  out.q.resize(m.size());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::span<const float> row = m.Row(r);
    float mx = 0.0f;
    for (float x : row) mx = std::max(mx, std::abs(x));
    float scale = mx > 0.0f ? mx / 127.0f : 1.0f;
    out.scales[r] = scale;
    for (std::size_t c = 0; c < row.size(); ++c) {
      float v = std::round(row[c] / scale);
      v = std::clamp(v, -127.0f, 127.0f);
      out.q[r * m.cols() + c] = static_cast<std::int8_t>(v);
    }
  }
  return out;
}

Matrix QuantizedMatrix::Dequantize() const {
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      m(r, c) = scales[r] * static_cast<float>(q[r * cols + c]);
  return m;
}

std::size_t WeightMatrix::rows() const {
  return quantized() ? quant().rows : dense().rows();
}

std::size_t WeightMatrix::cols() const {
  return quantized() ? quant().cols : dense().cols();
}

void WeightMatrix::Apply(std::span<const float> in,
                         std::span<float> out) const {
  if (!quantized()) {
    std::fill(out.begin(), out.end(), 0.0f);
    AddMatVec(dense(), in, out);
    return;
  }
  const QuantizedMatrix &qm = quant();
  if (in.size() != qm.cols || out.size() != qm.rows)
    throw ShapeError("WeightMatrix::Apply: shape mismatch");
  for (std::size_t r = 0; r < qm.rows; ++r) {
    const std::int8_t *row = qm.q.data() + r * qm.cols;
    double acc = 0.0;
    for (std::size_t c = 0; c < qm.cols; ++c)
      acc += static_cast<double>(row[c]) * in[c];
    out[r] = static_cast<float>(acc * qm.scales[r]);
  }
}

Matrix WeightMatrix::ToDense() const {
  return quantized() ? quant().Dequantize() : dense();
}

Linear::Linear(WeightMatrix a, WeightMatrix b) {
  if (a.cols() != b.rows())
    throw ShapeError("Linear: factor inner dimensions differ");
  factors_.push_back(std::move(a));
  factors_.push_back(std::move(b));
}

void Linear::Apply(std::span<const float> in, std::span<float> out) const {
  if (!factored()) {
    factors_[0].Apply(in, out);
    return;
  }
  std::vector<float> mid(factors_[1].rows());
  factors_[1].Apply(in, mid);
  factors_[0].Apply(mid, out);
}

std::vector<float> Linear::Apply(std::span<const float> in) const {
  std::vector<float> out(rows());
  Apply(in, out);
  return out;
}

Matrix Linear::ToDense() const {
  if (!factored()) return factors_[0].ToDense();
  return MatMul(factors_[0].ToDense(), factors_[1].ToDense());
}

std::int64_t Linear::NumParameters() const {
  std::int64_t n = 0;
  for (const WeightMatrix &w : factors_)
    n += static_cast<std::int64_t>(w.rows() * w.cols());
  return n;
}

TransducerModel TransducerModel::Zeros(const ModelConfig &c) {
  c.Check();
  TransducerModel m;
  m.config = c;
  m.subsampler[0].weight = Matrix(c.feat_dim, kConvKernel * c.feat_dim);
  m.subsampler[0].bias.assign(c.feat_dim, 0.0f);
  m.subsampler[1].weight = Matrix(c.encoder_dim, kConvKernel * c.feat_dim);
  m.subsampler[1].bias.assign(c.encoder_dim, 0.0f);
  m.dfsmn.resize(c.num_dfsmn_layers);
  for (DfsmnLayer &layer : m.dfsmn) {
    layer.in_proj = Linear(Matrix(c.dfsmn_proj_dim, c.encoder_dim));
    layer.taps = Matrix(c.memory_taps(), c.dfsmn_proj_dim);
    layer.out_proj = Linear(Matrix(c.encoder_dim, c.dfsmn_proj_dim));
    layer.bias.assign(c.encoder_dim, 0.0f);
  }
  m.embedding = Matrix(c.num_labels, c.embed_dim);
  m.predictor = Matrix(c.pred_dim, c.predictor_context * c.embed_dim);
  m.predictor_bias.assign(c.pred_dim, 0.0f);
  m.joint.enc = Linear(Matrix(c.joint_dim, c.encoder_dim));
  m.joint.pred = Linear(Matrix(c.joint_dim, c.pred_dim));
  m.joint.bias.assign(c.joint_dim, 0.0f);
  m.joint.out = Linear(Matrix(c.num_labels, c.joint_dim));
  m.joint.out_bias.assign(c.num_labels, 0.0f);
  return m;
}

void TransducerModel::Validate() const {
  const ModelConfig &c = config;
  c.Check();
  CheckShape(subsampler[0].weight, c.feat_dim, kConvKernel * c.feat_dim,
             "conv.0.weight");
  CheckShape(subsampler[0].bias, c.feat_dim, "conv.0.bias");
  CheckShape(subsampler[1].weight, c.encoder_dim, kConvKernel * c.feat_dim,
             "conv.1.weight");
  CheckShape(subsampler[1].bias, c.encoder_dim, "conv.1.bias");
  if (dfsmn.size() != static_cast<std::size_t>(c.num_dfsmn_layers))
    throw ShapeError("dfsmn: layer count differs from config");
  for (std::size_t l = 0; l < dfsmn.size(); ++l) {
    std::string base = "dfsmn." + std::to_string(l);
    CheckShape(dfsmn[l].in_proj, c.dfsmn_proj_dim, c.encoder_dim,
               base + ".in_proj");
    CheckShape(dfsmn[l].taps, c.memory_taps(), c.dfsmn_proj_dim,
               base + ".taps");
    CheckShape(dfsmn[l].out_proj, c.encoder_dim, c.dfsmn_proj_dim,
               base + ".out_proj");
    CheckShape(dfsmn[l].bias, c.encoder_dim, base + ".bias");
  }
  CheckShape(embedding, c.num_labels, c.embed_dim, "embedding");
  CheckShape(predictor, c.pred_dim, c.predictor_context * c.embed_dim,
             "predictor.weight");
  CheckShape(predictor_bias, c.pred_dim, "predictor.bias");
  CheckShape(joint.enc, c.joint_dim, c.encoder_dim, "joint.enc");
  CheckShape(joint.pred, c.joint_dim, c.pred_dim, "joint.pred");
  CheckShape(joint.bias, c.joint_dim, "joint.bias");
  CheckShape(joint.out, c.num_labels, c.joint_dim, "joint.out");
  CheckShape(joint.out_bias, c.num_labels, "joint.out_bias");

  for (const ConvLayer &conv : subsampler) {
    CheckFinite(conv.weight.data(), "conv.weight");
    CheckFinite(conv.bias, "conv.bias");
  }
  for (const DfsmnLayer &layer : dfsmn) {
    CheckFinite(layer.taps.data(), "dfsmn.taps");
    CheckFinite(layer.bias, "dfsmn.bias");
  }
  ForEachLinear(*this, [](const std::string &name, const Linear &l) {
    CheckFinite(l, name);
  });
  CheckFinite(embedding.data(), "embedding");
  CheckFinite(predictor.data(), "predictor.weight");
  CheckFinite(predictor_bias, "predictor.bias");
  CheckFinite(joint.bias, "joint.bias");
  CheckFinite(joint.out_bias, "joint.out_bias");
}

std::int64_t TransducerModel::NumParameters() const {
  std::int64_t n = 0;
  for (const ConvLayer &conv : subsampler)
    n += static_cast<std::int64_t>(conv.weight.size() + conv.bias.size());
  for (const DfsmnLayer &layer : dfsmn)
    n += static_cast<std::int64_t>(layer.taps.size() + layer.bias.size());
  ForEachLinear(*this, [&n](const std::string &, const Linear &l) {
    n += l.NumParameters();
  });
  n += static_cast<std::int64_t>(embedding.size() + predictor.size() +
                                 predictor_bias.size() + joint.bias.size() +
                                 joint.out_bias.size());
  return n;
}

}  // namespace tt
