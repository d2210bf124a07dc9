#pragma once

namespace qrm2 {
inline constexpr const char* kVersion = "0.1.0";
}
