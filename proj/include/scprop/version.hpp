#pragma once

namespace scprop {
inline constexpr const char* kVersion = "0.1.0";
}
