// src/decoder/features.cc

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

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tt/decoder.h"

namespace tt {

Frames ReadFeaturesText(std::istream &is) {
  Frames frames;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::vector<float> frame;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        frame.push_back(std::stof(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception &) {
        throw std::invalid_argument("feature line " + std::to_string(lineno) +
                                    ": bad value '" + tok + "'");
      }
    }
    if (frame.empty()) continue;
    if (!frames.empty() && frame.size() != frames.front().size())
      throw ShapeError("feature line " + std::to_string(lineno) +
                       ": inconsistent frame width");
    frames.push_back(std::move(frame));
  }
  return frames;
}

Frames ReadFeaturesBinary(std::istream &is, int32 feat_dim) {
  static_assert(std::endian::native == std::endian::little,
                "binary features assume a little-endian host");
  if (feat_dim <= 0) throw ShapeError("feature dimension must be positive");
  std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  const std::size_t frame_bytes = sizeof(float) * feat_dim;
  if (bytes.size() % frame_bytes != 0)
    throw ShapeError("binary feature size " + std::to_string(bytes.size()) +
                     " is not a multiple of " + std::to_string(frame_bytes));
  Frames frames(bytes.size() / frame_bytes, std::vector<float>(feat_dim));
  for (std::size_t t = 0; t < frames.size(); ++t)
    std::memcpy(frames[t].data(), bytes.data() + t * frame_bytes, frame_bytes);
  return frames;
}

void WriteFeaturesText(const Frames &frames, std::ostream &os) {
  for (const auto &frame : frames) {
    for (std::size_t i = 0; i < frame.size(); ++i) {
      char buf[32];
      auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), frame[i]);
      if (i) os << ' ';
      os.write(buf, end - buf);
    }
    os << '\n';
  }
}

void WriteFeaturesBinary(const Frames &frames, std::ostream &os) {
  for (const auto &frame : frames)
    os.write(reinterpret_cast<const char *>(frame.data()),
             static_cast<std::streamsize>(frame.size() * sizeof(float)));
}

Frames ReadFeatureFile(const std::string &path, int32 feat_dim) {
  const bool text = path.size() >= 4 && path.compare(path.size() - 4, 4, ".txt") == 0;
  std::ifstream is(path, text ? std::ios::in : std::ios::binary);
  if (!is) TT_ERR << "cannot open feature file " << path;
  Frames frames = text ? ReadFeaturesText(is) : ReadFeaturesBinary(is, feat_dim);
  for (const auto &f : frames)
    if (static_cast<int32>(f.size()) != feat_dim)
      throw ShapeError(path + ": frame width " + std::to_string(f.size()) +
                       " does not match model feat_dim " + std::to_string(feat_dim));
  return frames;
}

}  // namespace tt
