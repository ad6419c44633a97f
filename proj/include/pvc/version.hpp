#pragma once

namespace pvc {

inline constexpr const char* kVersion = "0.1.0";

} // namespace pvc
