#include "paritydisp/complex_text.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace paritydisp {

namespace {

bool is_sign(char c) { return c == '+' || c == '-'; }

// Length of an unsigned decimal literal starting at `pos` (digits, optional
// fraction, optional exponent with its own sign). Zero when none is present.
std::size_t scan_unsigned(std::string_view s, std::size_t pos) {
  std::size_t i = pos;
  std::size_t digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  }
  if (digits == 0) return 0;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    std::size_t j = i + 1;
    if (j < s.size() && is_sign(s[j])) ++j;
    std::size_t exp_digits = 0;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j, ++exp_digits;
    if (exp_digits > 0) i = j;
  }
  return i - pos;
}

double to_double(std::string_view s, std::size_t at) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("malformed number '" + std::string(s) + "'", at);
  }
  return value;
}

struct Term {
  double value = 0.0;
  bool imaginary = false;
  std::size_t end = 0;
};

// Reads [sign] [number] [i] starting at pos. A sign is mandatory when
// `need_sign` is set (the second term of "a+bi").
Term read_term(std::string_view s, std::size_t pos, bool need_sign) {
  Term t;
  double sign = 1.0;
  std::size_t i = pos;
  if (i < s.size() && is_sign(s[i])) {
    sign = s[i] == '-' ? -1.0 : 1.0;
    ++i;
  } else if (need_sign) {
    throw ParseError("expected '+' or '-' before the imaginary part", i);
  }
  if (i < s.size() && is_sign(s[i])) {
    throw ParseError("two consecutive signs", i);
  }
  const std::size_t len = scan_unsigned(s, i);
  double magnitude = 1.0;
  if (len > 0) {
    magnitude = to_double(s.substr(i, len), i);
    i += len;
  }
  if (i < s.size() && s[i] == 'i') {
    t.imaginary = true;
    ++i;
  } else if (len == 0) {
    throw ParseError("expected a number", i);
  }
  t.value = sign * magnitude;
  t.end = i;
  return t;
}

}  // namespace

std::complex<double> parse_complex(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  const std::string_view s = text.substr(0, end);
  if (begin == end) throw ParseError("empty complex literal", begin);

  const Term first = read_term(s, begin, false);
  if (first.end == s.size()) {
    return first.imaginary ? std::complex<double>(0.0, first.value)
                           : std::complex<double>(first.value, 0.0);
  }
  if (first.imaginary) {
    throw ParseError("imaginary part must come last", first.end);
  }
  const Term second = read_term(s, first.end, true);
  if (!second.imaginary) {
    throw ParseError("second term is missing the trailing 'i'", second.end);
  }
  if (second.end != s.size()) {
    throw ParseError("unexpected trailing characters", second.end);
  }
  return {first.value, second.value};
}

std::string format_complex(std::complex<double> z) {
  auto shortest = [](double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
  };
  const double re = z.real();
  const double im = z.imag();
  if (im == 0.0) return shortest(re);
  if (re == 0.0) return shortest(im) + "i";
  return shortest(re) + (std::signbit(im) ? "" : "+") + shortest(im) + "i";
}

}  // namespace paritydisp
