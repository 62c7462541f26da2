#include "pairinfo/csv.hpp"

#include <charconv>
#include <system_error>

namespace pairinfo {

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                    std::chars_format::general, 15);
  return std::string(buffer, result.ptr);
}

}  // namespace pairinfo
