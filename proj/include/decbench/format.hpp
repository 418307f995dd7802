#pragma once

#include <string>

namespace decbench {

/// Fixed-point text with `decimals` digits, rounding halves away from zero
/// on the decimal value as written (82.555 -> "82.56", -1.005 -> "-1.01").
std::string format_fixed(double value, int decimals);

}  // namespace decbench
