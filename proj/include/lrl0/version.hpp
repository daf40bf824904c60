#pragma once

namespace lrl0 {

inline constexpr const char* version = "0.1.0";

}  // namespace lrl0
