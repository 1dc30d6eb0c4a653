#pragma once

#include <stdexcept>
#include <string>

namespace stereo {

/// Exit-code class for CLI error reporting: 2 usage, 3 parse, 4 invariant,
/// 5 runtime.
enum class ErrorClass : int {
  Usage = 2,
  Parse = 3,
  Invariant = 4,
  Runtime = 5,
};

/// Base of every library error. `kind()` is a stable machine-parsable name.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, ErrorClass cls, const std::string& message)
      : std::runtime_error(kind + ": " + message),
        kind_(std::move(kind)),
        class_(cls) {}

  const std::string& kind() const noexcept { return kind_; }
  ErrorClass error_class() const noexcept { return class_; }
  int exit_code() const noexcept { return static_cast<int>(class_); }

 private:
  std::string kind_;
  ErrorClass class_;
};

#define STEREO_DEFINE_ERROR(NAME, CLASS)                      \
  class NAME : public Error {                                 \
   public:                                                    \
    explicit NAME(const std::string& message)                 \
        : Error(#NAME, ErrorClass::CLASS, message) {}         \
  }

STEREO_DEFINE_ERROR(NonPositiveDepth, Runtime);
STEREO_DEFINE_ERROR(DegenerateTranslation, Runtime);
STEREO_DEFINE_ERROR(InsufficientPoints, Runtime);
STEREO_DEFINE_ERROR(DegenerateConfiguration, Runtime);
STEREO_DEFINE_ERROR(ZeroPlaneOffset, Runtime);
STEREO_DEFINE_ERROR(PointAtInfinity, Runtime);
STEREO_DEFINE_ERROR(DegenerateBaseline, Runtime);
STEREO_DEFINE_ERROR(NonPositiveDisparity, Runtime);
STEREO_DEFINE_ERROR(OutOfBounds, Runtime);
STEREO_DEFINE_ERROR(ImageSizeMismatch, Runtime);
STEREO_DEFINE_ERROR(VolumeTooLarge, Runtime);
STEREO_DEFINE_ERROR(SizeMismatch, Runtime);
STEREO_DEFINE_ERROR(EmptyEvaluationSet, Runtime);
STEREO_DEFINE_ERROR(NonPositiveTime, Runtime);
STEREO_DEFINE_ERROR(DisparityOverflow, Runtime);
STEREO_DEFINE_ERROR(InvalidDisparityField, Runtime);
STEREO_DEFINE_ERROR(IoError, Runtime);
STEREO_DEFINE_ERROR(InvariantViolation, Invariant);
STEREO_DEFINE_ERROR(UsageError, Usage);

#undef STEREO_DEFINE_ERROR

/// Parse failures carry the 1-based line number (0 = not line-specific).
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message)
      : Error("ParseError", ErrorClass::Parse,
              line > 0 ? "line " + std::to_string(line) + ": " + message
                       : message),
        line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace stereo
