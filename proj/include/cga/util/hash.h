#pragma once

#include <cstdint>

#include "cga/util/random.h"

namespace cga {

// Order-dependent 64-bit combine with full avalanche; stable across
// platforms, unlike std::hash.
constexpr std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
  return splitmix64(seed ^ splitmix64(value + 0x632be59bd9b4e019ULL));
}

}  // namespace cga
