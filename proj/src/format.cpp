#include "usat/format.hpp"

#include <charconv>

#include "usat/error.hpp"

namespace usat {

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // fold -0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_percent(std::uint64_t count, std::uint64_t total,
                           int max_decimals) {
  if (total == 0) throw InvalidArgument("percentage of an empty total");
  if (max_decimals < 0 || max_decimals > 9)
    throw InvalidArgument("max_decimals out of range");
  // value * 10^d = count * 100 * 10^d / total; __int128 keeps this exact.
  using wide = unsigned __int128;
  wide scale = 1;
  int decimals = 0;
  for (; decimals <= max_decimals; ++decimals) {
    if ((wide{count} * 100 * scale) % total == 0) break;
    if (decimals < max_decimals) scale *= 10;
  }
  wide scaled;
  if (decimals > max_decimals) {
    decimals = max_decimals;
    scaled = (wide{count} * 100 * scale * 2 + total) / (wide{total} * 2);
  } else {
    scaled = wide{count} * 100 * scale / total;
  }
  const auto whole = static_cast<std::uint64_t>(scaled / scale);
  auto frac = static_cast<std::uint64_t>(scaled % scale);
  std::string out = std::to_string(whole);
  if (decimals > 0) {
    std::string digits = std::to_string(frac);
    out += '.';
    out.append(static_cast<std::size_t>(decimals) - digits.size(), '0');
    out += digits;
  }
  return out;
}

}  // namespace usat
