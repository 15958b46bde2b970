#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace inqlab {

using Rng = std::mt19937_64;

/// Counter-based stream split: a seed that depends only on its arguments, so
/// parallel runs draw from independent, reproducible streams.
std::uint64_t split_seed(std::uint64_t master, std::uint64_t index, std::string_view label,
                         std::uint64_t extra = 0);

inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Draws an index with probability proportional to weights[i].
std::size_t sample_index(std::span<const double> weights, Rng& rng);

}  // namespace inqlab
