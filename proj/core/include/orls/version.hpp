#pragma once

namespace orls {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace orls
