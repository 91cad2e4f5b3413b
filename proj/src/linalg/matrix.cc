// src/linalg/matrix.cc

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

#include "tt/matrix.h"

#include <algorithm>
#include <cmath>

namespace tt {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<float> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols)
    throw ShapeError("Matrix: data length " + std::to_string(data_.size()) +
                     " != " + std::to_string(rows) + "x" +
                     std::to_string(cols));
}

Matrix Matrix::Identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0f;
  return m;
}

Matrix Matrix::Diagonal(std::span<const float> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::Transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

std::vector<float> MatVec(const Matrix &m, std::span<const float> v) {
  std::vector<float> out(m.rows(), 0.0f);
  AddMatVec(m, v, out);
  return out;
}

void AddMatVec(const Matrix &m, std::span<const float> v,
               std::span<float> out) {
  if (v.size() != m.cols() || out.size() != m.rows())
    throw ShapeError("MatVec: matrix is " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()) + ", vector has " +
                     std::to_string(v.size()) + ", output has " +
                     std::to_string(out.size()));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::span<const float> row = m.Row(r);
    double acc = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c)
      acc += static_cast<double>(row[c]) * v[c];
    out[r] += static_cast<float>(acc);
  }
}

Matrix MatMul(const Matrix &a, const Matrix &b) {
  if (a.cols() != b.rows())
    throw ShapeError("MatMul: inner dimensions differ");
  Matrix out(a.rows(), b.cols());
  std::vector<double> acc(b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      double av = a(r, k);
      if (av == 0.0) continue;
      std::span<const float> brow = b.Row(k);
      for (std::size_t c = 0; c < brow.size(); ++c) acc[c] += av * brow[c];
    }
    for (std::size_t c = 0; c < b.cols(); ++c)
      out(r, c) = static_cast<float>(acc[c]);
  }
  return out;
}

double MaxAbsDiff(const Matrix &a, const Matrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("MaxAbsDiff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(static_cast<double>(a.data()[i]) - b.data()[i]));
  return m;
}

double FrobeniusNorm(const Matrix &m) {
  double s = 0.0;
  for (float x : m.data()) s += static_cast<double>(x) * x;
  return std::sqrt(s);
}

std::vector<double> LogScores(std::span<const double> raw) {
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!(raw[i] > 0.0))
      throw DomainError("LogScores: nonpositive entry at index " +
                        std::to_string(i));
    out[i] = std::log(raw[i]);
  }
  return out;
}

std::vector<double> Softmax(std::span<const double> logits) {
  std::vector<double> out(logits.begin(), logits.end());
  if (out.empty()) return out;
  double mx = *std::max_element(out.begin(), out.end());
  double sum = 0.0;
  for (double &x : out) {
    x = std::exp(x - mx);
    sum += x;
  }
  for (double &x : out) x /= sum;
  return out;
}

}  // namespace tt
