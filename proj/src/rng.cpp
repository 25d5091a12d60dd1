#include "scalarmc/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace scalarmc {

namespace detail {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

inline void philox_round(std::array<std::uint32_t, 4>& c, const std::array<std::uint32_t, 2>& k) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mul_hi_lo(kPhiloxM0, c[0], hi0, lo0);
    mul_hi_lo(kPhiloxM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        philox_round(counter, key);
        key[0] += kPhiloxW0;
        key[1] += kPhiloxW1;
    }
    return counter;
}

}  // namespace detail

NormalStream::NormalStream(const StreamKey& key) {
    if (key.obs_index > 0xFFFFFFFFull || key.particle_index > 0xFFFFFFFFull)
        throw std::invalid_argument("StreamKey: obs/particle index exceeds 32-bit stream space");
    key_ = {static_cast<std::uint32_t>(key.seed), static_cast<std::uint32_t>(key.seed >> 32)};
    obs_word_ = static_cast<std::uint32_t>(key.obs_index);
    particle_word_ = static_cast<std::uint32_t>(key.particle_index);
}

std::array<double, 2> NormalStream::next_uniform_block() {
    const std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(block_),
                                              static_cast<std::uint32_t>(block_ >> 32),
                                              obs_word_, particle_word_};
    ++block_;
    const auto r = detail::philox4x32(ctr, key_);
    const std::uint64_t a = (static_cast<std::uint64_t>(r[1]) << 32) | r[0];
    const std::uint64_t b = (static_cast<std::uint64_t>(r[3]) << 32) | r[2];
    // 53 random bits shifted into (0,1); the +0.5 keeps both endpoints out.
    constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
    return {(static_cast<double>(a >> 11) + 0.5) * scale,
            (static_cast<double>(b >> 11) + 0.5) * scale};
}

Vec2 NormalStream::normal_pair() {
    const auto u = next_uniform_block();
    const double r = std::sqrt(-2.0 * std::log(u[0]));
    const double a = 2.0 * std::numbers::pi * u[1];
    return {r * std::cos(a), r * std::sin(a)};
}

double NormalStream::normal() {
    if (has_normal_cache_) {
        has_normal_cache_ = false;
        return normal_cache_;
    }
    const Vec2 z = normal_pair();
    normal_cache_ = z.x2;
    has_normal_cache_ = true;
    return z.x1;
}

double NormalStream::uniform() {
    if (has_uniform_cache_) {
        has_uniform_cache_ = false;
        return uniform_cache_;
    }
    const auto u = next_uniform_block();
    uniform_cache_ = u[1];
    has_uniform_cache_ = true;
    return u[0];
}

}  // namespace scalarmc
