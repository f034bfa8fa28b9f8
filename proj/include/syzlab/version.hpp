#pragma once

namespace syzlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace syzlab
