#include "scalarmc/cost_model.hpp"

#include <stdexcept>

namespace scalarmc {

void CostModel::validate() const {
    if (n_observations < 1 || n_particles < 1 || n_timesteps < 1 || n_unknowns < 1 || n_basis < 1)
        throw std::invalid_argument("CostModel: counts must be positive");
    if (!(basis_eval_cost > 0.0)) throw std::invalid_argument("CostModel: C_b must be positive");
    if (parallel_width < 1) throw std::invalid_argument("CostModel: P must be positive");
}

double particle_cost(const CostModel& m) {
    m.validate();
    return double(m.n_observations) * double(m.n_particles) * double(m.n_timesteps) *
           double(m.n_unknowns) * m.basis_eval_cost / double(m.parallel_width);
}

double reference_cost(const CostModel& m) {
    m.validate();
    return double(m.n_timesteps) * double(m.n_basis) * double(m.n_basis);
}

double predict_cost_ratio(const CostModel& m) {
    m.validate();
    return m.basis_eval_cost * double(m.n_unknowns) / (double(m.n_basis) * double(m.n_basis));
}

std::int64_t disk_mode_count(int radius) {
    if (radius < 0) throw std::invalid_argument("disk_mode_count: radius must be >= 0");
    std::int64_t count = 0;
    for (int k1 = -radius; k1 <= radius; ++k1)
        for (int k2 = -radius; k2 <= radius; ++k2)
            if (double(k1) * k1 + double(k2) * k2 <= double(radius) * radius) ++count;
    return count;
}

}  // namespace scalarmc
