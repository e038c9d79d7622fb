#ifndef CPROB_TEXT_FORMAT_HPP
#define CPROB_TEXT_FORMAT_HPP

#include <charconv>
#include <string>
#include <system_error>

namespace cprob {

/// Shortest decimal form that parses back to exactly the same double.
/// Locale-free and deterministic.
inline std::string format_double(double value) {
  char buffer[32];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

/// Like format_double but integral values keep a trailing ".0" so data rows
/// read as reals ("1.0" rather than "1").
inline std::string format_real(double value) {
  std::string s = format_double(value);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos) {
    s += ".0";
  }
  return s;
}

}  // namespace cprob

#endif  // CPROB_TEXT_FORMAT_HPP
