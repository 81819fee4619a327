#pragma once

#include <cstdio>
#include <string>

namespace fentropy {

// Shortest-faithful decimal form used everywhere a real number is
// serialized. 17 significant digits round-trip a double exactly, so two
// runs that compute identical doubles emit identical bytes.
inline std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
}

}  // namespace fentropy
