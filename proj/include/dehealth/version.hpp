#pragma once

namespace dehealth {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dehealth
