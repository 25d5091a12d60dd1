#include "scalarmc/forward_ad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace scalarmc {

double AdProblemSpec::resolved_dt() const {
    if (dt > 0.0) return dt;
    double t_min = std::numeric_limits<double>::infinity();
    for (const auto& o : observations) t_min = std::min(t_min, o.t);
    return t_min / 200.0;
}

void AdProblemSpec::validate() const {
    if (observations.empty()) throw std::invalid_argument("AdProblemSpec: no observations");
    for (const auto& o : observations) {
        if (!(o.t > 0.0)) throw std::invalid_argument("AdProblemSpec: observation times must be positive");
        if (!o.x.finite()) throw std::invalid_argument("AdProblemSpec: non-finite observation point");
        if (o.x.x1 < 0.0 || o.x.x1 >= 1.0 || o.x.x2 < 0.0 || o.x.x2 >= 1.0)
            throw std::invalid_argument("AdProblemSpec: observation points must lie in [0,1)^2");
    }
    if (n_particles < 2) throw std::invalid_argument("AdProblemSpec: need at least two particles");
    if (scheme == StepScheme::milstein && !diffusion.has_derivative())
        throw std::invalid_argument("AdProblemSpec: Milstein requires diffusion derivatives");
}

namespace {

// Streams are keyed by the observation's slot, so the estimate for slot j is
// unchanged when observations are appended or removed elsewhere in the list.
ParticleEstimate estimate_observation(const AdProblemSpec& spec, std::size_t obs_index,
                                      std::uint64_t seed, int workers) {
    const Domain torus = Domain::unit_torus();
    const PathContext ctx{spec.velocity, spec.diffusion, spec.scheme, spec.resolved_dt()};
    const AdObservation obs = spec.observations[obs_index];
    const ScalarField& theta0 = spec.initial_condition;

    auto work = [&, obs, obs_index](const StreamKey& key) -> ParticleSample {
        StreamKey keyed = key;
        keyed.obs_index = obs_index;  // spec-level slot, not the slot within this call
        NormalStream rng(keyed);
        const PathResult path = simulate_to_time(obs.x, obs.t, ctx, torus, rng);
        return {theta0(path.terminal), 0.0, false};
    };
    return map_reduce(work, 1, spec.n_particles, seed, workers).front();
}

}  // namespace

std::vector<ParticleEstimate> observe_ad(const AdProblemSpec& spec, std::uint64_t seed,
                                         int workers) {
    spec.validate();
    std::vector<ParticleEstimate> out;
    out.reserve(spec.observations.size());
    for (std::size_t j = 0; j < spec.observations.size(); ++j)
        out.push_back(estimate_observation(spec, j, seed, workers));
    return out;
}

ParticleEstimate observe_ad_single(const AdProblemSpec& spec, std::size_t obs_index,
                                   std::uint64_t seed, int workers) {
    spec.validate();
    if (obs_index >= spec.observations.size())
        throw std::out_of_range("observe_ad_single: observation index out of range");
    return estimate_observation(spec, obs_index, seed, workers);
}

}  // namespace scalarmc
