#pragma once

namespace sphrase {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sphrase
