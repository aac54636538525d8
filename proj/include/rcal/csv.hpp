#pragma once

#include <string>

namespace rcal {

/// printf "%.12g". Byte-stable across runs, used for every CSV cell.
[[nodiscard]] std::string format_number(double value);

}  // namespace rcal
