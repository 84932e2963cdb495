#pragma once

// Counter-based random streams.
//
// Every random quantity in the library is addressed by (seed, purpose, index):
// the seed is the Philox key, the purpose tag and index are fixed words of the
// counter, and the low counter word walks through blocks within the stream.
// Draws therefore never depend on iteration order or on how work is split
// across threads.

#include <array>
#include <cstdint>

namespace screenlab {

using Seed = std::uint64_t;

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key) noexcept;
};

/// Tags for the independent stream families.
enum class Purpose : std::uint32_t {
    UnitType = 1,
    StatedType = 2,
    OutcomeNoise = 3,
    Assignment = 4,
    FirstStageNoise = 5,
    Bootstrap = 6,
    Replication = 7,
    SampleDraw = 8,
    TestDraw = 9,
};

/// Child seed for (tag, index). Used to derive per-replication and
/// per-component seeds from one root seed.
Seed derive_seed(Seed seed, std::uint64_t tag, std::uint64_t index) noexcept;

class Stream {
public:
    Stream(Seed seed, Purpose purpose, std::uint64_t index) noexcept;

    std::uint32_t next_u32() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Standard normal via Box-Muller (consumes one full block).
    double normal() noexcept;
    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint32_t below(std::uint32_t bound) noexcept;

private:
    void refill() noexcept;

    Philox4x32::Key key_;
    Philox4x32::Counter ctr_;
    Philox4x32::Counter buf_{};
    int pos_ = 4;
};

}  // namespace screenlab
