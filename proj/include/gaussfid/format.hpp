#pragma once

#include <string>

namespace gaussfid {

inline constexpr int kOutputDigits = 12;

/// %.12g rendering shared by every text output.
std::string format_number(double value);

}  // namespace gaussfid
