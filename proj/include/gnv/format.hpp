#pragma once

#include <string>

namespace gnv {

/// Shortest round-trip text for a double ("nan" for NaN).
std::string format_double(double v);

}  // namespace gnv
