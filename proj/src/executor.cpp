#include "scalarmc/executor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace scalarmc {

double pairwise_sum(std::span<const double> values) {
    if (values.empty()) return 0.0;
    std::vector<double> buf(values.begin(), values.end());
    std::size_t n = buf.size();
    while (n > 1) {
        const std::size_t half = n / 2;
        for (std::size_t i = 0; i < half; ++i) buf[i] = buf[2 * i] + buf[2 * i + 1];
        if (n % 2 == 1) {
            buf[half] = buf[n - 1];
            n = half + 1;
        } else {
            n = half;
        }
    }
    return buf[0];
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

namespace {

struct ObsBuffers {
    std::vector<double> values;
    std::vector<double> aux;
    std::vector<unsigned char> failed;
};

// Fill disjoint index ranges of the buffers from `workers` threads. Chunks are
// handed out by an atomic counter; each particle's entry depends only on its
// key, so the fill is schedule-independent.
void fill_parallel(const ParticleWork& work, std::uint64_t seed, std::int64_t obs,
                   std::int64_t n_particles, int workers, ObsBuffers& buf) {
    constexpr std::int64_t kChunk = 1024;
    const std::int64_t n_chunks = (n_particles + kChunk - 1) / kChunk;
    std::atomic<std::int64_t> next_chunk{0};
    std::atomic<bool> had_error{false};

    auto run = [&]() {
        for (;;) {
            const std::int64_t c = next_chunk.fetch_add(1);
            if (c >= n_chunks || had_error.load()) return;
            const std::int64_t lo = c * kChunk;
            const std::int64_t hi = std::min(lo + kChunk, n_particles);
            try {
                for (std::int64_t i = lo; i < hi; ++i) {
                    const StreamKey key{seed, static_cast<std::uint64_t>(obs),
                                        static_cast<std::uint64_t>(i)};
                    const ParticleSample s = work(key);
                    buf.values[static_cast<std::size_t>(i)] = s.value;
                    buf.aux[static_cast<std::size_t>(i)] = s.aux;
                    buf.failed[static_cast<std::size_t>(i)] = s.failed ? 1 : 0;
                }
            } catch (...) {
                had_error.store(true);
                return;
            }
        }
    };

    if (workers <= 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers) - 1);
        for (int w = 1; w < workers; ++w) pool.emplace_back(run);
        run();
        for (auto& t : pool) t.join();
    }
    if (had_error.load())
        throw std::runtime_error("map_reduce: a particle work function threw");
}

ParticleEstimate reduce_observation(const ObsBuffers& buf, std::int64_t n_particles) {
    std::vector<double> valid;
    std::vector<double> valid_aux;
    valid.reserve(static_cast<std::size_t>(n_particles));
    valid_aux.reserve(static_cast<std::size_t>(n_particles));
    std::int64_t n_failed = 0;
    for (std::int64_t i = 0; i < n_particles; ++i) {
        if (buf.failed[static_cast<std::size_t>(i)]) {
            ++n_failed;
        } else {
            valid.push_back(buf.values[static_cast<std::size_t>(i)]);
            valid_aux.push_back(buf.aux[static_cast<std::size_t>(i)]);
        }
    }
    if (valid.empty()) throw std::runtime_error("map_reduce: every particle of an observation failed");

    const auto n = static_cast<double>(valid.size());
    const double mean = pairwise_sum(valid) / n;
    double std_error = 0.0;
    if (valid.size() > 1) {
        std::vector<double> sq(valid.size());
        for (std::size_t i = 0; i < valid.size(); ++i) {
            const double d = valid[i] - mean;
            sq[i] = d * d;
        }
        const double var = pairwise_sum(sq) / (n - 1.0);
        std_error = std::sqrt(var / n);
    }
    const double aux_mean = pairwise_sum(valid_aux) / n;
    return {mean, std_error, n_particles, n_failed, aux_mean};
}

}  // namespace

std::vector<ParticleEstimate> map_reduce(const ParticleWork& work, std::int64_t n_observations,
                                         std::int64_t n_particles, std::uint64_t seed,
                                         int workers) {
    if (n_observations < 1) throw std::invalid_argument("map_reduce: need at least one observation");
    if (n_particles < 2) throw std::invalid_argument("map_reduce: need at least two particles");
    workers = resolve_workers(workers);

    std::vector<ParticleEstimate> estimates;
    estimates.reserve(static_cast<std::size_t>(n_observations));
    ObsBuffers buf;
    buf.values.resize(static_cast<std::size_t>(n_particles));
    buf.aux.resize(static_cast<std::size_t>(n_particles));
    buf.failed.resize(static_cast<std::size_t>(n_particles));
    for (std::int64_t obs = 0; obs < n_observations; ++obs) {
        fill_parallel(work, seed, obs, n_particles, workers, buf);
        estimates.push_back(reduce_observation(buf, n_particles));
    }
    return estimates;
}

}  // namespace scalarmc
