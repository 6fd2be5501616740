#pragma once

// Small helpers shared by the text parsers (function recipes, algorithm
// strings, CSV). Errors carry the character offset of the offending token.

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace bbga::detail {

struct Token {
  std::string_view text;
  std::size_t offset;
};

inline std::vector<Token> split(std::string_view s, char sep,
                                std::size_t base_offset = 0) {
  std::vector<Token> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back({s.substr(start, i - start), base_offset + start});
      start = i + 1;
    }
  }
  return out;
}

[[noreturn]] inline void parse_error(std::string_view what, std::string_view input,
                                     std::size_t offset) {
  throw std::invalid_argument(std::string(what) + " at position " +
                              std::to_string(offset) + " in '" +
                              std::string(input) + "'");
}

template <class T>
T parse_number(const Token& tok, std::string_view input, std::string_view what) {
  T value{};
  const char* first = tok.text.data();
  const char* last = first + tok.text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || tok.text.empty())
    parse_error("expected " + std::string(what), input, tok.offset);
  return value;
}

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace bbga::detail
