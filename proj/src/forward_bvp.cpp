#include "scalarmc/forward_bvp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scalarmc {

double BvpProblemSpec::resolved_dt() const {
    if (dt > 0.0) return dt;
    const double diam = domain.diameter();
    double kappa = 0.0;
    if (diffusion.is_isotropic()) kappa = diffusion.kappa();
    const double speed = velocity.amplitude_bound();
    const double denom = 2.0 * kappa + speed * diam;
    const double raw = denom > 0.0 ? 1e-3 * diam * diam / denom : 1e-2;
    return std::clamp(raw, 1e-6, 1e-2);
}

void BvpProblemSpec::validate() const {
    if (!domain.is_bounded()) throw std::invalid_argument("BvpProblemSpec: domain must be bounded");
    if (observations.empty()) throw std::invalid_argument("BvpProblemSpec: no observations");
    for (const auto& x : observations) {
        if (!x.finite()) throw std::invalid_argument("BvpProblemSpec: non-finite observation point");
        if (!domain.contains(x))
            throw std::invalid_argument("BvpProblemSpec: observation points must be strictly interior");
    }
    if (n_particles < 2) throw std::invalid_argument("BvpProblemSpec: need at least two particles");
    if (max_steps < 1) throw std::invalid_argument("BvpProblemSpec: max_steps must be positive");
    if (scheme == StepScheme::milstein && !diffusion.has_derivative())
        throw std::invalid_argument("BvpProblemSpec: Milstein requires diffusion derivatives");
}

std::vector<ParticleEstimate> observe_bvp(const BvpProblemSpec& spec, std::uint64_t seed,
                                          int workers) {
    spec.validate();
    const PathContext ctx{spec.velocity, spec.diffusion, spec.scheme, spec.resolved_dt()};

    auto work = [&](const StreamKey& key) -> ParticleSample {
        NormalStream rng(key);
        const Point2 x0 = spec.observations[key.obs_index];
        const PathResult path =
            simulate_to_exit(x0, ctx, spec.domain, spec.forcing, spec.max_steps, rng);
        if (path.failed) return {0.0, 0.0, true};
        return {spec.boundary_data(path.terminal) - path.f_integral, *path.exit_time, false};
    };
    return map_reduce(work, static_cast<std::int64_t>(spec.observations.size()),
                      spec.n_particles, seed, workers);
}

}  // namespace scalarmc
