#pragma once

namespace vcprov {

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace vcprov
