#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Pure
// function of (counter, key): block i of a stream never depends on blocks
// before it, which makes parallel sampling reproduce the serial sequence.

#include <array>
#include <cstdint>

namespace npovm::philox {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

Counter philox4x32_10(Counter counter, Key key);

/// Key derived from a 64-bit seed (low word first).
Key key_from_seed(std::uint64_t seed);

/// Counter for a 64-bit index (low word first, upper words zero).
Counter counter_from_index(std::uint64_t index);

/// Uniform double in [0, 1) with 53 random bits built from two words.
double to_unit_double(std::uint32_t hi, std::uint32_t lo);

/// Two independent uniforms for stream position `index`.
std::array<double, 2> uniform_pair(std::uint64_t seed, std::uint64_t index);

}  // namespace npovm::philox
