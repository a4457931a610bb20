#pragma once

namespace pickfactor {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace pickfactor
