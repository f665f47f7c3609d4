#include "vacdiff/format.hpp"

#include <array>
#include <charconv>

namespace vacdiff {

std::string format_sci(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  std::array<char, 64> buf{};
  const auto res =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::scientific, 8);
  return std::string(buf.data(), res.ptr);
}

std::string format_exact(double value) {
  if (value == 0.0) value = 0.0;
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

}  // namespace vacdiff
