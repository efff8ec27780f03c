#pragma once

#include <cstdint>

namespace fofkit::detail {

/// Bit c of the case index is set when corner c is below the iso value.
/// Each row lists edge triples terminated by -1.
extern const std::int8_t kTriTable[256][16];

}  // namespace fofkit::detail
