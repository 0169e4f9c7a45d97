#pragma once

namespace exrings {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace exrings
