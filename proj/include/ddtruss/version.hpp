#pragma once

namespace ddtruss {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ddtruss
