#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "scalarmc/rng.hpp"

namespace scalarmc {

// Monte Carlo estimate of one observation.
struct ParticleEstimate {
    double mean = 0.0;
    double std_error = 0.0;          // sample std / sqrt(valid particles)
    std::int64_t n_particles = 0;    // particles launched
    std::int64_t n_failed = 0;       // excluded from the mean
    double aux_mean = 0.0;           // mean of the per-particle aux statistic (e.g. exit time)
};

// Per-particle outcome produced by a work function.
struct ParticleSample {
    double value = 0.0;
    double aux = 0.0;
    bool failed = false;
};

// Work functions must be pure given their StreamKey: the executor may invoke
// them in any order on any number of workers.
using ParticleWork = std::function<ParticleSample(const StreamKey&)>;

// Deterministic sum in a fixed pairwise tree order, independent of threading.
double pairwise_sum(std::span<const double> values);

// Runs work over (observation, particle) pairs keyed by
// (seed, obs_index, particle_index) and reduces each observation with a fixed
// pairwise tree. Output is bit-identical for any worker count. Throws if all
// particles of an observation fail.
std::vector<ParticleEstimate> map_reduce(const ParticleWork& work, std::int64_t n_observations,
                                         std::int64_t n_particles, std::uint64_t seed,
                                         int workers = 1);

// Requested worker count, or hardware concurrency when requested <= 0.
int resolve_workers(int requested);

}  // namespace scalarmc
