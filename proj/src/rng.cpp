#include "screenlab/rng.hpp"

#include <cmath>
#include <numbers>

namespace screenlab {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline double to_unit(std::uint32_t a, std::uint32_t b) noexcept {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(a) << 32) | b) >> 11;
    return static_cast<double>(bits) * 0x1.0p-53;
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter c, Key k) noexcept {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k[0] += kWeyl0;
            k[1] += kWeyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, c[0], hi0, lo0);
        mulhilo(kMul1, c[2], hi1, lo1);
        c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
    return c;
}

Seed derive_seed(Seed seed, std::uint64_t tag, std::uint64_t index) noexcept {
    const Philox4x32::Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                                  static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32) ^ 0x5EEDu};
    const auto out = Philox4x32::block(ctr, key);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

Stream::Stream(Seed seed, Purpose purpose, std::uint64_t index) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      ctr_{0, static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
           static_cast<std::uint32_t>(purpose)} {}

void Stream::refill() noexcept {
    buf_ = Philox4x32::block(ctr_, key_);
    ++ctr_[0];
    pos_ = 0;
}

std::uint32_t Stream::next_u32() noexcept {
    if (pos_ == 4) refill();
    return buf_[pos_++];
}

double Stream::uniform() noexcept {
    const std::uint32_t a = next_u32();
    const std::uint32_t b = next_u32();
    return to_unit(a, b);
}

double Stream::normal() noexcept {
    refill();
    pos_ = 4;
    const double u1 = 1.0 - to_unit(buf_[0], buf_[1]);  // (0, 1]
    const double u2 = to_unit(buf_[2], buf_[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint32_t Stream::below(std::uint32_t bound) noexcept {
    // Lemire's nearly-divisionless rejection method.
    std::uint64_t m = static_cast<std::uint64_t>(next_u32()) * bound;
    auto low = static_cast<std::uint32_t>(m);
    if (low < bound) {
        const std::uint32_t threshold = static_cast<std::uint32_t>(-bound) % bound;
        while (low < threshold) {
            m = static_cast<std::uint64_t>(next_u32()) * bound;
            low = static_cast<std::uint32_t>(m);
        }
    }
    return static_cast<std::uint32_t>(m >> 32);
}

}  // namespace screenlab
