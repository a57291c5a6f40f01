#pragma once

namespace cfplan {

inline constexpr const char* kVersion = "0.1.0";

// Binary container magics. Both formats are little-endian.
inline constexpr const char* kDatasetMagic = "CFPDSET1";
inline constexpr const char* kCheckpointMagic = "CGANPLAN";

}  // namespace cfplan
