#include "diurnal/common.hpp"

#include <charconv>
#include <cmath>

namespace diurnal {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (v == 0.0) return "0";
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

}  // namespace diurnal
