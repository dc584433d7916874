#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>

#include "paritydisp/error.hpp"

namespace paritydisp {

/// Raised by parse_complex; `position()` is the 0-based offending offset.
class ParseError : public InvalidArgument {
 public:
  ParseError(const std::string& what, std::size_t position)
      : InvalidArgument(what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parses "a", "bi", "a+bi", "a-bi" (optional leading sign, exponents allowed,
/// "i" alone means 1i). Rejects doubled signs and a missing trailing "i".
std::complex<double> parse_complex(std::string_view text);

/// Shortest text that parse_complex reads back to the same value ("0.5+0.3i").
std::string format_complex(std::complex<double> z);

}  // namespace paritydisp
