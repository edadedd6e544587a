#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace doikit {

enum class Errc {
  NotSquare,
  NotHermitian,
  NotNormal,
  NoConvergence,
  DimensionMismatch,
  InvalidP,
  InvalidAlpha,
  InvalidArgument,
  EmptySymbol,
  DuplicateFrequency,
  NonFiniteValue,
  DivergentTail,
  InvalidModulus,
  ZeroDenominator,
  TagParamMismatch,
  ScaleUnreachable,
  ParseError,
  ConfigInvalid,
  IoError,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace doikit
