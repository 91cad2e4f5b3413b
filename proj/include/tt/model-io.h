// tt/model-io.h

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

#ifndef TT_MODEL_IO_H_
#define TT_MODEL_IO_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tt/model.h"

namespace tt {

// TTRD container:
//   bytes 0-3  "TTRD"
//   byte 4     version (1)
//   u32 LE     metadata length, then that many bytes of UTF-8 key=value lines
//              (config fields, then the ordered tensor manifest)
//   payloads   in manifest order, row-major little-endian; f32 tensors as
//              rows*cols floats, int8 tensors as rows f32 scales followed by
//              rows*cols int8 values.
inline constexpr std::uint8_t kTtrdVersion = 1;

enum class ModelErrorCode {
  kBadMagic,
  kVersionMismatch,
  kMalformedMetadata,
  kShapeMismatch,
  kTruncated,
  kTrailingData,
  kIoError,
};

const char *ToString(ModelErrorCode code);

class ModelFormatError : public std::runtime_error {
 public:
  ModelFormatError(ModelErrorCode code, const std::string &what)
      : std::runtime_error(std::string(ToString(code)) + ": " + what),
        code_(code) {}
  ModelErrorCode code() const { return code_; }

 private:
  ModelErrorCode code_;
};

std::vector<std::uint8_t> SaveModel(const TransducerModel &model);
TransducerModel LoadModel(const std::vector<std::uint8_t> &bytes);

void WriteModelFile(const TransducerModel &model, const std::string &path);
TransducerModel ReadModelFile(const std::string &path);

// One manifest row, in payload order.
struct TensorInfo {
  std::string name;
  std::string dtype;  // "f32" or "int8"
  std::size_t rows = 0;
  std::size_t cols = 0;
};
std::vector<TensorInfo> TensorManifest(const TransducerModel &model);

}  // namespace tt

#endif  // TT_MODEL_IO_H_
