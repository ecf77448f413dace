#pragma once

namespace famscan {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace famscan
