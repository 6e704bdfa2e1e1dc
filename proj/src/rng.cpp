#include "microloc/rng.hpp"

#include <cmath>
#include <numbers>

namespace microloc {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

// 53-bit uniform on (0,1) from two 32-bit words.
double to_unit(std::uint32_t hi, std::uint32_t lo) {
    std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 21) ^ (lo >> 11);
    return (static_cast<double>(bits) + 0.5) * 0x1p-53;
}

} // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
        std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
        std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) { return mix64(mix64(master) ^ (index * 0xA24BAED4963EE407ull)); }

NormalStream::NormalStream(std::uint64_t seed, std::uint64_t stream) : stream_(stream) {
    std::uint64_t k = mix64(seed ^ mix64(stream));
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

double NormalStream::operator()(std::uint64_t i) const {
    const std::uint64_t block = i >> 1;
    auto r = philox4x32({static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32), 0u, 0u}, key_);
    const double u1 = to_unit(r[0], r[1]);
    const double u2 = to_unit(r[2], r[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return (i & 1) ? radius * std::sin(angle) : radius * std::cos(angle);
}

void NormalStream::fill(std::span<double> out, std::uint64_t offset) const {
    std::size_t k = 0;
    if ((offset & 1) && k < out.size()) out[k++] = (*this)(offset);
    for (; k + 1 < out.size(); k += 2) {
        const std::uint64_t block = (offset + k) >> 1;
        auto r = philox4x32({static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32), 0u, 0u}, key_);
        const double radius = std::sqrt(-2.0 * std::log(to_unit(r[0], r[1])));
        const double angle = 2.0 * std::numbers::pi * to_unit(r[2], r[3]);
        out[k] = radius * std::cos(angle);
        out[k + 1] = radius * std::sin(angle);
    }
    if (k < out.size()) out[k] = (*this)(offset + k);
}

double NormalStream::uniform(std::uint64_t i) const {
    auto r = philox4x32({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32), 1u, 0u}, key_);
    return to_unit(r[0], r[1]);
}

} // namespace microloc
