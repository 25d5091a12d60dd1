#pragma once

#include <cstdint>
#include <optional>

#include "scalarmc/fields.hpp"
#include "scalarmc/geometry.hpp"
#include "scalarmc/rng.hpp"

namespace scalarmc {

enum class StepScheme { euler_maruyama, milstein };

// Outcome of one simulated path of dX = -v(X) dt + sigma(X) dW.
struct PathResult {
    Point2 terminal;
    std::optional<double> exit_time;  // set iff the path left a bounded domain
    double f_integral = 0.0;          // time integral of the forcing along the path
    std::int64_t steps_taken = 0;
    bool failed = false;              // max_steps exhausted without exit
};

// One Euler-Maruyama step: x - v(x) dt + sigma(x) sqrt(dt) xi (componentwise
// for diagonal sigma).
Point2 em_step(Point2 x, const VelocityField& velocity, const DiffusionModel& diffusion,
               double dt, const NoiseDraw& noise);

// Milstein step: Euler-Maruyama plus 0.5 sigma_d(x) sigma_d'(x) (xi_d^2 - 1) dt
// per component. Identical to em_step for constant sigma. Requires derivative
// information on the diffusion model.
Point2 milstein_step(Point2 x, const VelocityField& velocity, const DiffusionModel& diffusion,
                     double dt, const NoiseDraw& noise);

Point2 scheme_step(StepScheme scheme, Point2 x, const VelocityField& velocity,
                   const DiffusionModel& diffusion, double dt, const NoiseDraw& noise);

// Problem fields shared by every path of one simulation.
struct PathContext {
    const VelocityField& velocity;
    const DiffusionModel& diffusion;
    StepScheme scheme = StepScheme::euler_maruyama;
    double dt = 1e-3;
};

// Integrate to a fixed final time: ceil(t_final / dt) steps, the last one
// shortened so the path ends exactly at t_final. Positions are wrapped after
// each step on periodic domains.
PathResult simulate_to_time(Point2 x0, double t_final, const PathContext& ctx,
                            const Domain& domain, NormalStream& rng);

// Integrate until the first step whose endpoint leaves the bounded domain.
// The exit point is the linear interpolant of the crossing segment onto the
// boundary; tau = (completed steps) dt + fraction * dt. The forcing integral
// is the left Riemann sum f(X_i) dt over full steps plus the fractional
// contribution of the crossing step. Sets `failed` after max_steps.
PathResult simulate_to_exit(Point2 x0, const PathContext& ctx, const Domain& domain,
                            const ScalarField& forcing, std::int64_t max_steps,
                            NormalStream& rng);

}  // namespace scalarmc
