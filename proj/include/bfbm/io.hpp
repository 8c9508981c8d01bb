#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace bfbm {

inline constexpr const char* kVersion = "1.0.0";

// Shortest decimal string that round-trips the double exactly.
std::string format_double(double v);

// Comment block at the top of every output file: tool version, the full
// configuration, and the seed, one '# key=value' line each.
void write_header(std::ostream& os, const std::string& subcommand,
                  const std::vector<std::pair<std::string, std::string>>& config);

}  // namespace bfbm
