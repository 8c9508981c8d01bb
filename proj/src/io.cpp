#include "bfbm/io.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace bfbm {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, res.ptr);
}

void write_header(std::ostream& os, const std::string& subcommand,
                  const std::vector<std::pair<std::string, std::string>>& config) {
    os << "# tool=bfbm\n";
    os << "# version=" << kVersion << "\n";
    os << "# subcommand=" << subcommand << "\n";
    for (const auto& [k, v] : config) os << "# " << k << "=" << v << "\n";
}

}  // namespace bfbm
