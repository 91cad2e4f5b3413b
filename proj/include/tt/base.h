// tt/base.h

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

#ifndef TT_BASE_H_
#define TT_BASE_H_

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace tt {

using int32 = std::int32_t;
using int64 = std::int64_t;

// Dimension or shape disagreement between operands.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class LogLevel { kError = 0, kWarning = 1, kInfo = 2, kDebug = 3 };

// Current level, read once from the TT_LOG environment variable
// ("error", "warn", "info", "debug"; default "warn").
LogLevel GetLogLevel();
void SetLogLevel(LogLevel level);

namespace internal {

class LogMessage {
 public:
  LogMessage(LogLevel level, const char *file, int line);
  ~LogMessage();
  std::ostream &stream() { return ss_; }

 private:
  LogLevel level_;
  std::ostringstream ss_;
};

// Stream sink that throws std::runtime_error on destruction of the full
// expression; used by TT_ERR.
class ErrorMessage {
 public:
  ErrorMessage(const char *file, int line);
  [[noreturn]] ~ErrorMessage() noexcept(false);
  std::ostream &stream() { return ss_; }

 private:
  std::ostringstream ss_;
};

}  // namespace internal
}  // namespace tt

#define TT_LOG_AT(level)                                  \
  if (static_cast<int>(level) > static_cast<int>(::tt::GetLogLevel())) { \
  } else                                                  \
    ::tt::internal::LogMessage(level, __FILE__, __LINE__).stream()

#define TT_LOG TT_LOG_AT(::tt::LogLevel::kInfo)
#define TT_WARN TT_LOG_AT(::tt::LogLevel::kWarning)
#define TT_VLOG TT_LOG_AT(::tt::LogLevel::kDebug)
#define TT_ERR ::tt::internal::ErrorMessage(__FILE__, __LINE__).stream()

#define TT_ASSERT(cond)                                                 \
  do {                                                                  \
    if (!(cond)) TT_ERR << "Assertion failed: (" << #cond << ")";      \
  } while (0)

#endif  // TT_BASE_H_
