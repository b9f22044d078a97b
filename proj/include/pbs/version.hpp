#pragma once

namespace pbs {

inline constexpr const char* kVersion = "0.1.0";

} // namespace pbs
