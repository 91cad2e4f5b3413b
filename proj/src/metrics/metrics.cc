// src/metrics/metrics.cc

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

#include "tt/metrics.h"

#include <sstream>
#include <stdexcept>

namespace tt {

double ErrorBreakdown::wer() const {
  return ref_length > 0 ? static_cast<double>(errors()) / ref_length : 0.0;
}

ErrorBreakdown &ErrorBreakdown::operator+=(const ErrorBreakdown &o) {
  substitutions += o.substitutions;
  deletions += o.deletions;
  insertions += o.insertions;
  ref_length += o.ref_length;
  return *this;
}

SpeedReport MakeSpeedReport(std::span<const DecodeTrace> traces, double audio_seconds) {
  if (!(audio_seconds > 0.0)) throw std::invalid_argument("audio_seconds must be > 0");
  SpeedReport r;
  int64 encoder_ns = 0, search_ns = 0;
  for (const DecodeTrace &t : traces) {
    ++r.num_utterances;
    r.frames_total += t.frames_total;
    r.frames_skipped += t.frames_skipped;
    r.wfst_steps += t.wfst_steps;
    encoder_ns += t.encoder_ns;
    search_ns += t.search_ns;
  }
  if (r.frames_total > 0) {
    r.blank_rate = static_cast<double>(r.frames_skipped) / r.frames_total;
    r.step_ratio = static_cast<double>(r.wfst_steps) / r.frames_total;
  }
  r.rtf = (encoder_ns + search_ns) * 1e-9 / audio_seconds;
  r.s_rtf = search_ns * 1e-9 / audio_seconds;
  return r;
}

std::string FormatKeyValue(const ErrorBreakdown &e) {
  std::ostringstream os;
  os << "ref_length=" << e.ref_length << '\n'
     << "substitutions=" << e.substitutions << '\n'
     << "deletions=" << e.deletions << '\n'
     << "insertions=" << e.insertions << '\n'
     << "wer=" << (e.wer_defined() ? std::to_string(e.wer()) : "undefined") << '\n';
  return os.str();
}

std::string FormatKeyValue(const SpeedReport &r) {
  std::ostringstream os;
  os << "utterances=" << r.num_utterances << '\n'
     << "frames_total=" << r.frames_total << '\n'
     << "frames_skipped=" << r.frames_skipped << '\n'
     << "wfst_steps=" << r.wfst_steps << '\n'
     << "blank_rate=" << r.blank_rate << '\n'
     << "step_ratio=" << r.step_ratio << '\n'
     << "rtf=" << r.rtf << '\n'
     << "s_rtf=" << r.s_rtf << '\n';
  return os.str();
}

std::string FormatTable(const std::vector<std::string> &header,
                        const std::vector<std::vector<std::string>> &rows) {
  std::vector<std::size_t> width(header.size(), 0);
  auto widen = [&](const std::vector<std::string> &row) {
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i)
      width[i] = std::max(width[i], row[i].size());
  };
  widen(header);
  for (const auto &row : rows) widen(row);
  std::ostringstream os;
  auto emit = [&](const std::vector<std::string> &row) {
    std::string line;
    for (std::size_t i = 0; i < width.size(); ++i) {
      std::string cell = i < row.size() ? row[i] : "";
      if (i) line += "  ";
      line += cell + std::string(width[i] - cell.size(), ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    os << line << '\n';
  };
  emit(header);
  for (const auto &row : rows) emit(row);
  return os.str();
}

}  // namespace tt
