#pragma once

namespace isodepth {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace isodepth
