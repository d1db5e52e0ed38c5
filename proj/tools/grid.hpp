#pragma once

#include <string_view>
#include <vector>

namespace selfnorm::cli {

/// Parses "v1,v2,..." or "lo:hi:count" (count evenly spaced points, both
/// ends included). `field` names the option in error messages.
/// Throws std::invalid_argument on malformed or empty grids.
std::vector<double> parse_grid(std::string_view text, std::string_view field);

}  // namespace selfnorm::cli
