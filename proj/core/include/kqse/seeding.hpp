#pragma once

#include <cstdint>
#include <random>

namespace kqse {

using Engine = std::mt19937_64;

// One step of the splitmix64 generator; used as a 64-bit mixing function.
std::uint64_t splitmix64(std::uint64_t x);

// Stream identifiers so that signal and noise draws for the same setting and
// repetition never share an engine state.
enum class Stream : std::uint64_t { Signal = 1, Noise = 2, Pilot = 3 };

// Counter-based seed derivation: the result depends only on the arguments, so
// the order in which workers process settings never changes any batch.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t setting_index,
                          std::uint64_t repetition, Stream stream = Stream::Signal);

// Uniform double in [0, 1) built from the top 53 bits of one engine draw.
inline double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace kqse
