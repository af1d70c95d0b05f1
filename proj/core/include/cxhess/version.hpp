#pragma once

namespace cxhess {

inline constexpr const char* version = "0.1.0";

} // namespace cxhess
