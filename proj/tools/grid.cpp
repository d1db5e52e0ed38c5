#include "grid.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace selfnorm::cli {
namespace {

[[noreturn]] void bad(std::string_view field, std::string_view text, std::string_view why) {
  throw std::invalid_argument(std::string(field) + ": malformed grid '" + std::string(text) +
                              "' (" + std::string(why) + ")");
}

double number(std::string_view item, std::string_view field, std::string_view text) {
  while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
  while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
  if (!item.empty() && item.front() == '+') item.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
  if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
    bad(field, text, "'" + std::string(item) + "' is not a number");
  }
  if (!std::isfinite(v)) bad(field, text, "values must be finite");
  return v;
}

// Rounds to 15 significant digits so that 0.1:1:10 yields 0.3 rather than
// 0.30000000000000004.
double tidy(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 15);
  double out = v;
  std::from_chars(buf, res.ptr, out);
  return out;
}

}  // namespace

std::vector<double> parse_grid(std::string_view text, std::string_view field) {
  if (text.empty()) bad(field, text, "empty");
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos) {
      bad(field, text, "expected lo:hi:count");
    }
    const double lo = number(text.substr(0, c1), field, text);
    const double hi = number(text.substr(c1 + 1, c2 - c1 - 1), field, text);
    const double count = number(text.substr(c2 + 1), field, text);
    if (!(count >= 1.0) || count != std::floor(count) || count > 1e7) {
      bad(field, text, "count must be a positive integer");
    }
    const auto k = static_cast<std::size_t>(count);
    if (k == 1 && lo != hi) bad(field, text, "a single point needs lo == hi");
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
      if (i + 1 == k) {
        out.push_back(hi);
        continue;
      }
      out.push_back(tidy(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(k - 1)));
    }
    return out;
  }
  std::string_view rest = text;
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(number(rest.substr(0, comma), field, text));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

}  // namespace selfnorm::cli
