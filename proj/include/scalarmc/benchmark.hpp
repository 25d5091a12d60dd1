#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "scalarmc/cost_model.hpp"

namespace scalarmc {

// Cost-scaling measurement: particle vs spectral reference evaluation of the
// same forward map, across velocity dimensions. One tier per wavenumber
// cutoff; the velocity is a fixed prior draw at that cutoff and the reference
// basis matches the unknown set (N_b = N_u).
struct BenchmarkConfig {
    std::vector<int> cutoffs = {8, 16, 32};
    int repetitions = 5;            // timed repetitions (median reported)
    std::int64_t n_particles = 500;
    int n_observations = 2;
    double t_final = 0.05;
    double dt = 5e-4;
    double kappa = 0.01;
    double prior_s0 = 1.0;
    double prior_alpha = 2.5;
    std::uint64_t seed = 0;
    bool run_reference = true;

    friend bool operator==(const BenchmarkConfig&, const BenchmarkConfig&) = default;
};

struct BenchmarkRow {
    int cutoff = 0;
    std::int64_t n_unknowns = 0;       // lattice count at the cutoff
    std::int64_t n_basis = 0;
    double particle_seconds = 0.0;     // median wall time per forward-map evaluation
    double reference_seconds = 0.0;
    double particle_jitter = 0.0;      // (max - min) / median over repetitions
    double reference_jitter = 0.0;
    bool jitter_flagged = false;       // any jitter > 50%
    double basis_eval_seconds = 0.0;   // measured C_b: time per velocity evaluation
    double predicted_ratio = 0.0;      // C_b N_u / N_b^2 with C_b normalized per unknown
};

struct BenchmarkReport {
    std::vector<BenchmarkRow> rows;
    double particle_slope = 0.0;   // log-log slope of time vs N_u
    double reference_slope = 0.0;
};

BenchmarkReport benchmark_scaling(const BenchmarkConfig& config, int workers = 1);

// Median wall time per call of a thunk: one warm-up run discarded, then
// `repetitions` timed runs on the monotonic clock. Also reports jitter.
struct TimingResult {
    double median_seconds = 0.0;
    double jitter = 0.0;
};
TimingResult time_median(const std::function<void()>& thunk, int repetitions);

}  // namespace scalarmc
