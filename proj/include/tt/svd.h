// tt/svd.h

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

#ifndef TT_SVD_H_
#define TT_SVD_H_

#include <cstddef>
#include <vector>

#include "tt/matrix.h"

namespace tt {

// m = u * diag(s) * vt, with u m×k, vt k×n, s descending and nonnegative.
struct SvdFactors {
  Matrix u;
  std::vector<double> s;
  Matrix vt;

  std::size_t rank() const { return s.size(); }
};

// Thin SVD by one-sided Jacobi rotations; k = min(rows, cols). Columns of u
// belonging to zero singular values are completed to an orthonormal set.
// Throws ShapeError on an empty matrix.
SvdFactors Svd(const Matrix &m);

// Keeps the leading k triplets; k must not exceed the rank.
SvdFactors Truncate(const SvdFactors &f, std::size_t k);

Matrix Reconstruct(const SvdFactors &f);

// Smallest k with sum_{i<k} s_i^2 >= energy * sum s_i^2, at least 1.
std::size_t RankForEnergy(const std::vector<double> &s, double energy);

}  // namespace tt

#endif  // TT_SVD_H_
