// tt/matrix.h

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

#ifndef TT_MATRIX_H_
#define TT_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

#include "tt/base.h"

namespace tt {

// Dense row-major matrix of 32-bit floats. Weights, features and posteriors
// all live in one of these.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0f) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<float> data);

  static Matrix Identity(std::size_t n);
  static Matrix Diagonal(std::span<const float> diag);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  float &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  float operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<float> Row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const float> Row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }

  Matrix Transpose() const;

  bool operator==(const Matrix &other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> data_;
};

// y = m * v. Accumulates in double.
std::vector<float> MatVec(const Matrix &m, std::span<const float> v);

// out += m * v, without allocation.
void AddMatVec(const Matrix &m, std::span<const float> v, std::span<float> out);

Matrix MatMul(const Matrix &a, const Matrix &b);

// Largest absolute elementwise difference; shapes must agree.
double MaxAbsDiff(const Matrix &a, const Matrix &b);
double FrobeniusNorm(const Matrix &m);

// Natural log of softmax-domain scores. No renormalization is done; entries
// must be positive.
std::vector<double> LogScores(std::span<const double> raw);

std::vector<double> Softmax(std::span<const double> logits);

}  // namespace tt

#endif  // TT_MATRIX_H_
