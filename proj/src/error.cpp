#include "decbench/error.hpp"

namespace decbench {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument: return "invalid-argument";
    case Errc::kBackendUnavailable: return "backend-unavailable";
    case Errc::kCorruptCounter: return "corrupt-counter";
    case Errc::kDecodeFailed: return "decode-failed";
    case Errc::kInsufficientSamples: return "insufficient-samples";
    case Errc::kNotConverged: return "not-converged";
    case Errc::kMalformedYuv: return "malformed-yuv";
    case Errc::kInsufficientPoints: return "insufficient-points";
    case Errc::kInvalidCurve: return "invalid-curve";
    case Errc::kOutOfRange: return "out-of-range";
    case Errc::kNoOverlap: return "no-overlap";
    case Errc::kIncompleteCurve: return "incomplete-curve";
    case Errc::kPlanValidation: return "plan-validation";
    case Errc::kTemplate: return "template";
    case Errc::kEncodeFailed: return "encode-failed";
    case Errc::kNotFound: return "not-found";
    case Errc::kEmptyReport: return "empty-report";
    case Errc::kIo: return "io";
  }
  return "unknown";
}

bool is_validation_error(Errc code) {
  switch (code) {
    case Errc::kInvalidArgument:
    case Errc::kMalformedYuv:
    case Errc::kInsufficientPoints:
    case Errc::kInvalidCurve:
    case Errc::kOutOfRange:
    case Errc::kNoOverlap:
    case Errc::kIncompleteCurve:
    case Errc::kPlanValidation:
    case Errc::kTemplate:
    case Errc::kNotFound:
    case Errc::kEmptyReport:
      return true;
    default:
      return false;
  }
}

}  // namespace decbench
