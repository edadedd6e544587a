#include "doikit/error.hpp"

namespace doikit {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NotSquare: return "NotSquare";
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NotNormal: return "NotNormal";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::InvalidP: return "InvalidP";
    case Errc::InvalidAlpha: return "InvalidAlpha";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::EmptySymbol: return "EmptySymbol";
    case Errc::DuplicateFrequency: return "DuplicateFrequency";
    case Errc::NonFiniteValue: return "NonFiniteValue";
    case Errc::DivergentTail: return "DivergentTail";
    case Errc::InvalidModulus: return "InvalidModulus";
    case Errc::ZeroDenominator: return "ZeroDenominator";
    case Errc::TagParamMismatch: return "TagParamMismatch";
    case Errc::ScaleUnreachable: return "ScaleUnreachable";
    case Errc::ParseError: return "ParseError";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace doikit
