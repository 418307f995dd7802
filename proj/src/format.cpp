#include "decbench/format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace decbench {

std::string format_fixed(double value, int decimals) {
  if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  decimals = std::clamp(decimals, 0, 9);
  const double scale = std::pow(10.0, decimals);
  // Snap binary noise (82.555 is stored as 82.55499999...) before rounding.
  const double snapped = std::round(std::fabs(value) * scale * 1e6) / 1e6;
  const auto units = static_cast<std::uint64_t>(std::round(snapped));
  const auto divisor = static_cast<std::uint64_t>(scale);
  std::string out;
  if (value < 0 && units != 0) out += '-';
  out += std::to_string(units / divisor);
  if (decimals > 0) {
    std::string frac = std::to_string(units % divisor);
    out += '.';
    out.append(static_cast<std::size_t>(decimals) - frac.size(), '0');
    out += frac;
  }
  return out;
}

}  // namespace decbench
