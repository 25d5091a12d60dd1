#include "scalarmc/sde.hpp"

#include <cmath>
#include <stdexcept>

namespace scalarmc {

Point2 em_step(Point2 x, const VelocityField& velocity, const DiffusionModel& diffusion,
               double dt, const NoiseDraw& noise) {
    if (!(dt > 0.0)) throw std::invalid_argument("em_step: dt must be positive");
    const Vec2 v = velocity(x);
    const Vec2 s = diffusion.sigma(x);
    const double root_dt = std::sqrt(dt);
    return {x.x1 - v.x1 * dt + s.x1 * root_dt * noise.xi.x1,
            x.x2 - v.x2 * dt + s.x2 * root_dt * noise.xi.x2};
}

Point2 milstein_step(Point2 x, const VelocityField& velocity, const DiffusionModel& diffusion,
                     double dt, const NoiseDraw& noise) {
    // Constant sigma has sigma' = 0; the correction vanishes identically.
    if (diffusion.is_isotropic()) return em_step(x, velocity, diffusion, dt, noise);
    const Vec2 sp = diffusion.sigma_prime(x);  // throws without derivative info
    const Vec2 s = diffusion.sigma(x);
    Point2 next = em_step(x, velocity, diffusion, dt, noise);
    next.x1 += 0.5 * s.x1 * sp.x1 * (noise.xi.x1 * noise.xi.x1 - 1.0) * dt;
    next.x2 += 0.5 * s.x2 * sp.x2 * (noise.xi.x2 * noise.xi.x2 - 1.0) * dt;
    return next;
}

Point2 scheme_step(StepScheme scheme, Point2 x, const VelocityField& velocity,
                   const DiffusionModel& diffusion, double dt, const NoiseDraw& noise) {
    return scheme == StepScheme::euler_maruyama
               ? em_step(x, velocity, diffusion, dt, noise)
               : milstein_step(x, velocity, diffusion, dt, noise);
}

PathResult simulate_to_time(Point2 x0, double t_final, const PathContext& ctx,
                            const Domain& domain, NormalStream& rng) {
    if (!(t_final > 0.0)) throw std::invalid_argument("simulate_to_time: t_final must be positive");
    if (!(ctx.dt > 0.0)) throw std::invalid_argument("simulate_to_time: dt must be positive");

    const auto n_steps = static_cast<std::int64_t>(std::ceil(t_final / ctx.dt));
    Point2 x = domain.wrap(x0);
    for (std::int64_t i = 0; i < n_steps; ++i) {
        const double dt = (i + 1 < n_steps) ? ctx.dt : t_final - double(n_steps - 1) * ctx.dt;
        x = scheme_step(ctx.scheme, x, ctx.velocity, ctx.diffusion, dt, rng.noise());
        x = domain.wrap(x);
    }
    return {x, std::nullopt, 0.0, n_steps, false};
}

PathResult simulate_to_exit(Point2 x0, const PathContext& ctx, const Domain& domain,
                            const ScalarField& forcing, std::int64_t max_steps,
                            NormalStream& rng) {
    if (!domain.is_bounded())
        throw std::invalid_argument("simulate_to_exit: domain must be bounded");
    if (!domain.contains(x0))
        throw std::invalid_argument("simulate_to_exit: start point must be interior");
    if (!(ctx.dt > 0.0)) throw std::invalid_argument("simulate_to_exit: dt must be positive");

    Point2 x = x0;
    double f_integral = 0.0;
    for (std::int64_t step = 0; step < max_steps; ++step) {
        const Point2 next = scheme_step(ctx.scheme, x, ctx.velocity, ctx.diffusion, ctx.dt,
                                        rng.noise());
        if (!domain.contains(next)) {
            const BoundaryHit hit = domain.boundary_exit(x, next);
            f_integral += forcing(x) * hit.fraction * ctx.dt;
            const double tau = double(step) * ctx.dt + hit.fraction * ctx.dt;
            return {hit.point, tau, f_integral, step + 1, false};
        }
        f_integral += forcing(x) * ctx.dt;
        x = next;
    }
    PathResult r{x, std::nullopt, f_integral, max_steps, true};
    return r;
}

}  // namespace scalarmc
