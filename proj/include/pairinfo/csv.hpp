#pragma once

#include <string>

namespace pairinfo {

/// Locale-independent decimal rendering with 15 significant digits
/// (period decimal separator, no grouping).
std::string format_double(double value);

}  // namespace pairinfo
