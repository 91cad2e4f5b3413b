// tt/compress.h

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

#ifndef TT_COMPRESS_H_
#define TT_COMPRESS_H_

#include <optional>
#include <string>
#include <vector>

#include "tt/model.h"

namespace tt {

struct CompressionSpec {
  // Glob patterns over Linear names ("dfsmn.3.in_proj", "joint.out", ...).
  std::vector<std::string> targets = {"dfsmn.*.in_proj", "dfsmn.*.out_proj"};
  // Explicit rank for every target; overrides `energy` when set.
  std::optional<int64> rank;
  // Keep the smallest rank holding this fraction of the squared singular
  // value mass.
  double energy = kDefaultEnergy;
  bool quantize = false;

  static constexpr double kDefaultEnergy = 0.9;

  // Throws std::invalid_argument on energy outside (0, 1], rank < 1 or an
  // empty target list.
  void Check() const;
};

struct LayerCompression {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t rank = 0;
  bool clamped = false;       // requested rank exceeded min(rows, cols)
  double error_sq = 0.0;      // squared Frobenius norm of W - A B
  double tail_energy = 0.0;   // sum of discarded squared singular values
  int64 params_before = 0;
  int64 params_after = 0;
};

struct CompressionReport {
  std::vector<LayerCompression> layers;
  std::vector<std::string> warnings;
  int64 params_before = 0;
  int64 params_after = 0;
};

// Replaces every target W (m x n) by A = U diag(s) (m x k) and B = V^T
// (k x n) from its truncated SVD. Throws std::invalid_argument when a
// pattern matches no layer.
TransducerModel SvdCompress(const TransducerModel &model, const CompressionSpec &spec,
                            CompressionReport *report = nullptr);

// Stores every DFSMN projection (all factors) as int8 with one symmetric
// scale per output row. Other weights are untouched.
TransducerModel QuantizeInt8(const TransducerModel &model);

// "key=value" lines, one "layer=..." line per compressed layer.
std::string FormatReport(const CompressionReport &report);

// Shell-style wildcard match ('*', '?', '[...]').
bool GlobMatch(const std::string &pattern, const std::string &name);

}  // namespace tt

#endif  // TT_COMPRESS_H_
