#pragma once

namespace coarselab {

inline constexpr const char* kToolVersion = "coarselab 0.1.0";

}  // namespace coarselab
