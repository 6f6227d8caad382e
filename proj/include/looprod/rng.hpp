#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace looprod {

/// SplitMix64 output function (Steele, Lea & Flood 2014): a bijective 64-bit finalizer.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/*!
  Derives the key of stream `streamIndex` under `baseSeed`.

      key = mix64(mix64(baseSeed) + (streamIndex + 1) * kGoldenGamma)

  The inner mix decorrelates nearby base seeds; the outer mix spreads
  consecutive stream indices over the full 64-bit space. The map is a
  bijection in streamIndex for a fixed baseSeed, so distinct streams never
  share a key.
*/
[[nodiscard]] constexpr std::uint64_t stream_key(std::uint64_t baseSeed, std::uint64_t streamIndex) noexcept {
    return mix64(mix64(baseSeed) + (streamIndex + 1) * kGoldenGamma);
}

/*!
  xoshiro256** (Blackman & Vigna), seeded from a stream key by four SplitMix64
  steps. Satisfies UniformRandomBitGenerator.
*/
class StreamRng {
public:
    using result_type = std::uint64_t;

    StreamRng(std::uint64_t baseSeed, std::uint64_t streamIndex) noexcept {
        std::uint64_t z = stream_key(baseSeed, streamIndex);
        for (auto& word : state_) {
            z += kGoldenGamma;
            word = mix64(z);
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0, 1): midpoints of 2^53 equal bins, so neither 0 nor 1 occurs.
    double uniform_open() noexcept { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    /// Uniform on [0, 1).
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
};

}  // namespace looprod
