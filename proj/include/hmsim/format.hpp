#pragma once

#include <cstdio>
#include <string>

namespace hmsim
{
// 17 significant digits: round-trips every double, keeps golden files stable
inline std::string format_real(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}
}  // namespace hmsim
