#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace microloc {

/// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer, used to derive keys for sub-streams.
std::uint64_t mix64(std::uint64_t x);

/// Random-access stream of standard normals. Value i depends only on (seed, stream, i).
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t stream);

    double operator()(std::uint64_t i) const;
    /// out[k] = (*this)(offset + k).
    void fill(std::span<double> out, std::uint64_t offset = 0) const;
    /// Uniform on (0,1) at index i, independent of the normals of this stream.
    double uniform(std::uint64_t i) const;

private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
};

/// Fixed component ids used to split one seed into independent sub-streams.
namespace streams {
inline constexpr std::uint64_t main_noise = 1;
inline constexpr std::uint64_t history = 2;
inline constexpr std::uint64_t bridge = 3;
inline constexpr std::uint64_t second_noise = 4;
inline constexpr std::uint64_t fine_noise = 5;
inline constexpr std::uint64_t auxiliary = 6;
} // namespace streams

/// Seed of path number `index` under a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

} // namespace microloc
