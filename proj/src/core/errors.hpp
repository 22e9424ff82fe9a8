#pragma once

#include <stdexcept>
#include <string>

namespace capcheck {

// Stable numeric error categories, shared with the C API status codes.
enum class ErrorCode : int {
  kParse = 2,
  kIo = 3,
  kUsage = 4,
  kCycle = 5,
  kUnknownId = 6,
  kDomain = 7,
  kUnsortedStream = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct SourceSpan {
  std::string file;
  int line = 1;    // 1-based
  int column = 1;  // 1-based

  std::string to_string() const {
    return file + ":" + std::to_string(line) + ":" + std::to_string(column);
  }
};

class ParseError : public Error {
 public:
  ParseError(SourceSpan span, const std::string& message,
             std::string expected = "")
      : Error(ErrorCode::kParse, span.to_string() + ": " + message),
        span_(std::move(span)),
        expected_(std::move(expected)) {}
  const SourceSpan& span() const { return span_; }
  const std::string& expected() const { return expected_; }

 private:
  SourceSpan span_;
  std::string expected_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error(ErrorCode::kIo, message) {}
};

class CycleError : public Error {
 public:
  explicit CycleError(const std::string& message)
      : Error(ErrorCode::kCycle, message) {}
};

class UnknownIdError : public Error {
 public:
  explicit UnknownIdError(const std::string& message)
      : Error(ErrorCode::kUnknownId, message) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message)
      : Error(ErrorCode::kDomain, message) {}
};

class UnsortedStreamError : public Error {
 public:
  explicit UnsortedStreamError(const std::string& message)
      : Error(ErrorCode::kUnsortedStream, message) {}
};

}  // namespace capcheck
