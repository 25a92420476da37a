#pragma once

namespace phasebench {

inline constexpr const char* kVersion = "phasebench 1.0.0";

}  // namespace phasebench
