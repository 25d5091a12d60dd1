#pragma once

#include <cstdint>
#include <vector>

#include "scalarmc/executor.hpp"
#include "scalarmc/fields.hpp"
#include "scalarmc/sde.hpp"

namespace scalarmc {

struct AdObservation {
    double t = 0.0;
    Point2 x;

    friend bool operator==(const AdObservation&, const AdObservation&) = default;
};

// Time-dependent advection-diffusion problem on the periodic unit torus:
// observe theta(t_j, x_j) where
//   d theta/dt = -v . grad theta + (1/2) sum (sigma sigma^T) d2 theta,
//   theta(0, .) = theta_0.
struct AdProblemSpec {
    VelocityField velocity;
    DiffusionModel diffusion = DiffusionModel::isotropic(0.0);
    ScalarField initial_condition;
    std::vector<AdObservation> observations;
    double dt = 0.0;                 // <= 0: min_j t_j / 200
    std::int64_t n_particles = 10000;
    StepScheme scheme = StepScheme::euler_maruyama;

    double resolved_dt() const;
    void validate() const;
};

// Backward-particle estimate of every observation: theta(t_j, x_j) is the
// mean of theta_0 over terminal positions of paths started at x_j and run to
// time t_j. The estimate at slot j depends only on (seed, j, observation j).
std::vector<ParticleEstimate> observe_ad(const AdProblemSpec& spec, std::uint64_t seed,
                                         int workers = 1);

// Single-observation entry point; identical to observe_ad(spec)[obs_index].
ParticleEstimate observe_ad_single(const AdProblemSpec& spec, std::size_t obs_index,
                                   std::uint64_t seed, int workers = 1);

}  // namespace scalarmc
