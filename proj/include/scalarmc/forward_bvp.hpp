#pragma once

#include <cstdint>
#include <vector>

#include "scalarmc/executor.hpp"
#include "scalarmc/fields.hpp"
#include "scalarmc/sde.hpp"

namespace scalarmc {

// Dirichlet boundary-value problem on a bounded domain:
//   -v . grad theta + (1/2) sum (sigma sigma^T) d2 theta = f   in D,
//   theta = theta_bc                                            on dD,
// observed at interior points x_j.
struct BvpProblemSpec {
    VelocityField velocity;
    DiffusionModel diffusion = DiffusionModel::isotropic(0.0);
    ScalarField forcing;        // f
    ScalarField boundary_data;  // theta_bc
    Domain domain = Domain::box({0.0, 0.0}, {1.0, 1.0});
    std::vector<Point2> observations;
    double dt = 0.0;            // <= 0: 1e-3 diam^2 / (2 kappa + |v| diam), clipped to [1e-6, 1e-2]
    std::int64_t n_particles = 10000;
    StepScheme scheme = StepScheme::euler_maruyama;
    std::int64_t max_steps = 10'000'000;

    double resolved_dt() const;
    void validate() const;
};

// Exit-time particle estimate of every observation:
//   theta(x_j) = E[theta_bc(X_tau)] - E[ integral_0^tau f(X_t) dt ],
// averaged over paths started at x_j. aux_mean carries the mean exit time.
std::vector<ParticleEstimate> observe_bvp(const BvpProblemSpec& spec, std::uint64_t seed,
                                          int workers = 1);

}  // namespace scalarmc
