#pragma once

#include <array>
#include <cstdint>

#include "scalarmc/geometry.hpp"

namespace scalarmc {

// Identifies one independent random stream. Streams for distinct keys are
// statistically independent, and the values drawn from a stream depend only
// on the key and the draw sequence, never on scheduling or worker count.
struct StreamKey {
    std::uint64_t seed = 0;
    std::uint64_t obs_index = 0;       // observation slot (or a stream tag)
    std::uint64_t particle_index = 0;  // particle slot within the observation
};

struct NoiseDraw {
    Vec2 xi;  // two independent standard normals
};

namespace detail {

// Philox 4x32-10 block function (Salmon et al., SC 2011).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

}  // namespace detail

// Counter-based stream of standard normals and uniforms. A Philox block keyed
// by (seed, obs_index, particle_index) yields two U(0,1) variates per 128-bit
// counter value; normals come from the Box-Muller transform.
class NormalStream {
public:
    explicit NormalStream(const StreamKey& key);

    double normal();
    Vec2 normal_pair();               // consumes exactly one block
    NoiseDraw noise() { return NoiseDraw{normal_pair()}; }
    double uniform();                 // in (0,1)

private:
    std::array<double, 2> next_uniform_block();

    std::array<std::uint32_t, 2> key_;
    std::uint32_t obs_word_ = 0;
    std::uint32_t particle_word_ = 0;
    std::uint64_t block_ = 0;

    double normal_cache_ = 0.0;
    bool has_normal_cache_ = false;
    double uniform_cache_ = 0.0;
    bool has_uniform_cache_ = false;
};

}  // namespace scalarmc
