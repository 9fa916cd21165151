#pragma once

namespace qmw {

inline constexpr const char* version = "0.1.0";

} // namespace qmw
