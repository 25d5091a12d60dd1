#pragma once

#include <cstdint>

namespace scalarmc {

// Abstract cost model of one forward-map evaluation.
struct CostModel {
    std::int64_t n_observations = 1;   // N_o
    std::int64_t n_particles = 1;      // N_p
    std::int64_t n_timesteps = 1;      // N_t
    std::int64_t n_unknowns = 1;       // N_u
    std::int64_t n_basis = 1;          // N_b
    double basis_eval_cost = 1.0;      // C_b
    int parallel_width = 1;            // P

    void validate() const;
};

// Particle method: N_o N_p N_t N_u C_b / P.
double particle_cost(const CostModel& model);

// Spectral reference: N_t N_b^2.
double reference_cost(const CostModel& model);

// Predicted particle/reference cost ratio in the large-P limit: C_b N_u / N_b^2.
double predict_cost_ratio(const CostModel& model);

// Lattice points with |k|_2 <= radius, origin included. Matches the unknown
// counts used to label velocity dimensions (197 at radius 8, 797 at 16,
// 3209 at 32).
std::int64_t disk_mode_count(int radius);

}  // namespace scalarmc
