#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace decbench {

enum class Errc {
  kInvalidArgument,
  kBackendUnavailable,
  kCorruptCounter,
  kDecodeFailed,
  kInsufficientSamples,
  kNotConverged,
  kMalformedYuv,
  kInsufficientPoints,
  kInvalidCurve,
  kOutOfRange,
  kNoOverlap,
  kIncompleteCurve,
  kPlanValidation,
  kTemplate,
  kEncodeFailed,
  kNotFound,
  kEmptyReport,
  kIo,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Validation failures (bad plan, bad curve, bad arguments) as opposed to
// failures while executing external work.
bool is_validation_error(Errc code);

}  // namespace decbench
