#include "gaussfid/format.hpp"

#include <cstdio>

namespace gaussfid {

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", kOutputDigits, value);
  return buf;
}

}  // namespace gaussfid
