#pragma once

// Counter-based random numbers: Philox4x32-10 (Salmon et al., "Parallel
// random numbers: as easy as 1, 2, 3", SC'11). The generator is a pure
// function of (key, counter), so replications can be addressed directly
// by index without any shared state.

#include <array>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace mplm {

inline constexpr const char* kRngName = "philox4x32-10";
inline constexpr int kRngVersion = 1;

namespace detail {

inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// One Philox4x32-10 block: encrypts a 128-bit counter under a 64-bit key.
inline constexpr std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                            std::array<std::uint32_t, 2> key) {
    constexpr std::uint64_t kMul0 = 0xD2511F53u;
    constexpr std::uint64_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        const std::uint64_t p0 = kMul0 * ctr[0];
        const std::uint64_t p1 = kMul1 * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
}

/// Identifies one independent random stream under a base seed.
struct StreamId {
    std::uint64_t value = 0;
    friend bool operator==(StreamId, StreamId) = default;
};

/// Hashes an ordered list of 64-bit components into a stream id.
inline StreamId derive_stream(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x6A09E667F3BCC908ULL;
    for (std::uint64_t p : parts) h = detail::mix64(h ^ detail::mix64(p + 0x9E3779B97F4A7C15ULL));
    return {h};
}

inline std::uint64_t bits_of(double v) { return std::bit_cast<std::uint64_t>(v); }

/// Satisfies UniformRandomBitGenerator. The key is the seed; the 128-bit
/// counter is (stream, block index), so streams under one seed never overlap.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed, StreamId stream = {}) : seed_(seed), stream_(stream.value) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (lane_ == 2) refill();
        return buffer_[lane_++];
    }

    /// Uniform on the open interval (0, 1), 53 bits of resolution.
    double uniform_open() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    std::uint64_t blocks_consumed() const { return block_; }

private:
    void refill() {
        const auto out = philox4x32_10(
            {static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
             static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
            {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
        ++block_;
        buffer_[0] = (std::uint64_t{out[1]} << 32) | out[0];
        buffer_[1] = (std::uint64_t{out[3]} << 32) | out[2];
        lane_ = 0;
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int lane_ = 2;
};

}  // namespace mplm
