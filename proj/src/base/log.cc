// src/base/log.cc

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

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <mutex>

#include "tt/base.h"

namespace tt {

namespace {

LogLevel ParseLevel(const char *s) {
  if (s == nullptr) return LogLevel::kWarning;
  if (!std::strcmp(s, "error")) return LogLevel::kError;
  if (!std::strcmp(s, "warn") || !std::strcmp(s, "warning"))
    return LogLevel::kWarning;
  if (!std::strcmp(s, "info")) return LogLevel::kInfo;
  if (!std::strcmp(s, "debug")) return LogLevel::kDebug;
  return LogLevel::kWarning;
}

std::atomic<int> &LevelStore() {
  static std::atomic<int> level{
      static_cast<int>(ParseLevel(std::getenv("TT_LOG")))};
  return level;
}

const char *Basename(const char *path) {
  const char *slash = std::strrchr(path, '/');
  return slash ? slash + 1 : path;
}

const char *LevelName(LogLevel level) {
  switch (level) {
    case LogLevel::kError: return "ERROR";
    case LogLevel::kWarning: return "WARNING";
    case LogLevel::kInfo: return "LOG";
    case LogLevel::kDebug: return "VLOG";
  }
  return "?";
}

}  // namespace

LogLevel GetLogLevel() { return static_cast<LogLevel>(LevelStore().load()); }

void SetLogLevel(LogLevel level) {
  LevelStore().store(static_cast<int>(level));
}

namespace internal {

LogMessage::LogMessage(LogLevel level, const char *file, int line)
    : level_(level) {
  ss_ << LevelName(level) << " (" << Basename(file) << ":" << line << ") ";
}

LogMessage::~LogMessage() {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  std::cerr << ss_.str() << '\n';
}

ErrorMessage::ErrorMessage(const char *file, int line) {
  ss_ << Basename(file) << ":" << line << ": ";
}

ErrorMessage::~ErrorMessage() noexcept(false) {
  throw std::runtime_error(ss_.str());
}

}  // namespace internal
}  // namespace tt
