#include "rcal/csv.hpp"

#include <cstdio>

namespace rcal {

std::string format_number(double value) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof(buf), "%.12g", value);
    return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace rcal
