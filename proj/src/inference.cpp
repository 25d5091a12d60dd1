#include "scalarmc/inference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scalarmc {

namespace {

// Stream tag for the chain's own randomness, outside the observation range.
constexpr std::uint64_t kChainStreamTag = 0xFFFFFFFFull;

bool is_canonical(int k1, int k2) { return k1 > 0 || (k1 == 0 && k2 > 0); }

}  // namespace

void PriorSpec::validate() const {
    if (cutoff < 1) throw std::invalid_argument("PriorSpec: cutoff must be >= 1");
    if (!(s0 >= 0.0)) throw std::invalid_argument("PriorSpec: s0 must be >= 0");
    if (!std::isfinite(alpha)) throw std::invalid_argument("PriorSpec: alpha must be finite");
}

std::vector<ModeIndex> PriorSpec::modes() const {
    std::vector<ModeIndex> out;
    for (int k1 = -cutoff; k1 <= cutoff; ++k1) {
        for (int k2 = -cutoff; k2 <= cutoff; ++k2) {
            if (!is_canonical(k1, k2)) continue;
            if (double(k1) * k1 + double(k2) * k2 > double(cutoff) * cutoff) continue;
            out.push_back({k1, k2});
        }
    }
    std::sort(out.begin(), out.end(), [](const ModeIndex& a, const ModeIndex& b) {
        const double na = double(a.k1) * a.k1 + double(a.k2) * a.k2;
        const double nb = double(b.k1) * b.k1 + double(b.k2) * b.k2;
        if (na != nb) return na < nb;
        return std::pair(a.k1, a.k2) < std::pair(b.k1, b.k2);
    });
    return out;
}

std::vector<double> PriorSpec::component_stds() const {
    std::vector<double> out;
    for (const auto& m : modes()) {
        const double kn = std::sqrt(double(m.k1) * m.k1 + double(m.k2) * m.k2);
        const double s = s0 * std::pow(kn, -alpha);
        out.push_back(s);  // Re
        out.push_back(s);  // Im
    }
    return out;
}

int PriorSpec::dimension() const { return 2 * static_cast<int>(modes().size()); }

std::vector<double> prior_draw(const PriorSpec& prior, NormalStream& rng) {
    prior.validate();
    const auto stds = prior.component_stds();
    std::vector<double> u(stds.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = stds[i] * rng.normal();
    return u;
}

FourierVelocityField velocity_from_coefficients(const PriorSpec& prior,
                                                std::span<const double> u) {
    const auto modes = prior.modes();
    if (u.size() != 2 * modes.size())
        throw std::invalid_argument("velocity_from_coefficients: coefficient size mismatch");
    std::vector<VelocityMode> vm;
    vm.reserve(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i)
        vm.push_back({modes[i].k1, modes[i].k2, {u[2 * i], u[2 * i + 1]}});
    return FourierVelocityField(std::move(vm), prior.cutoff);
}

double prior_norm(const PriorSpec& prior, std::span<const double> u) {
    const auto stds = prior.component_stds();
    if (u.size() != stds.size())
        throw std::invalid_argument("prior_norm: coefficient size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double r = u[i] / stds[i];
        s += r * r;
    }
    return 0.5 * s;
}

void LikelihoodSpec::validate() const {
    if (data.size() != forward.observations.size())
        throw std::invalid_argument("LikelihoodSpec: data length must match observation count");
    if (!(noise_std > 0.0)) throw std::invalid_argument("LikelihoodSpec: noise_std must be positive");
}

double LikelihoodSpec::misfit(const PriorSpec& prior, std::span<const double> u) const {
    if (std::isinf(noise_std)) return 0.0;
    AdProblemSpec spec = forward;
    spec.velocity = VelocityField::fourier(velocity_from_coefficients(prior, u));
    const auto estimates = observe_ad(spec, forward_seed, workers);
    double ss = 0.0;
    for (std::size_t j = 0; j < data.size(); ++j) {
        const double r = data[j] - estimates[j].mean;
        ss += r * r;
    }
    return ss / (2.0 * noise_std * noise_std);
}

namespace {

double chain_phi(const PriorSpec& prior, const LikelihoodSpec* likelihood,
                 std::span<const double> u) {
    return likelihood ? likelihood->misfit(prior, u) : 0.0;
}

void track_map(ChainState& state, const PriorSpec& prior) {
    const double objective = state.phi + prior_norm(prior, state.u);
    if (objective < state.map_objective) {
        state.map_objective = objective;
        state.map_u = state.u;
    }
}

}  // namespace

ChainState chain_init(const PriorSpec& prior, const LikelihoodSpec* likelihood,
                      std::vector<double> u0) {
    prior.validate();
    if (likelihood) likelihood->validate();
    if (static_cast<int>(u0.size()) != prior.dimension())
        throw std::invalid_argument("chain_init: state dimension mismatch");
    ChainState state;
    state.u = std::move(u0);
    state.phi = chain_phi(prior, likelihood, state.u);
    track_map(state, prior);
    return state;
}

ChainState pcn_step(ChainState state, double beta, const PriorSpec& prior,
                    const LikelihoodSpec* likelihood, NormalStream& rng) {
    if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("pcn_step: beta must be in (0,1]");

    const auto xi = prior_draw(prior, rng);
    const double contraction = std::sqrt(1.0 - beta * beta);
    std::vector<double> proposal(state.u.size());
    for (std::size_t i = 0; i < proposal.size(); ++i)
        proposal[i] = contraction * state.u[i] + beta * xi[i];

    bool accept = false;
    double phi_prop = 0.0;
    bool failed = false;
    try {
        phi_prop = chain_phi(prior, likelihood, proposal);
    } catch (const std::exception&) {
        failed = true;  // forward-map failure: reject and flag
    }
    // The uniform is drawn unconditionally to keep stream consumption fixed.
    const double uacc = rng.uniform();
    if (!failed && std::isfinite(phi_prop))
        accept = uacc < std::exp(std::min(0.0, state.phi - phi_prop));

    ++state.iteration;
    if (failed) ++state.flagged_failures;
    if (accept) {
        state.u = std::move(proposal);
        state.phi = phi_prop;
        ++state.accepted;
    }
    track_map(state, prior);
    return state;
}

ChainResult run_chain(const ChainConfig& config, const PriorSpec& prior,
                      const LikelihoodSpec* likelihood, std::optional<std::vector<double>> u0) {
    if (config.n_steps < 0) throw std::invalid_argument("run_chain: n_steps must be >= 0");
    if (config.thin < 1) throw std::invalid_argument("run_chain: thin must be >= 1");

    NormalStream rng(StreamKey{config.seed, kChainStreamTag, 0});
    std::vector<double> start = u0 ? std::move(*u0) : prior_draw(prior, rng);
    ChainState state = chain_init(prior, likelihood, std::move(start));

    ChainResult result;
    result.phi_trace.reserve(static_cast<std::size_t>(config.n_steps));
    for (std::int64_t i = 0; i < config.n_steps; ++i) {
        state = pcn_step(std::move(state), config.beta, prior, likelihood, rng);
        result.phi_trace.push_back(state.phi);
        if (state.iteration > config.burn_in &&
            (state.iteration - config.burn_in - 1) % config.thin == 0)
            result.samples.push_back(state.u);
    }
    result.acceptance_rate =
        config.n_steps > 0 ? double(state.accepted) / double(state.iteration) : 0.0;
    result.map_u = state.map_u;
    result.map_objective = state.map_objective;
    result.final_state = std::move(state);
    return result;
}

namespace {

std::pair<double, double> component_range(const std::vector<std::vector<double>>& samples,
                                          int component) {
    double lo = samples[0][static_cast<std::size_t>(component)];
    double hi = lo;
    for (const auto& s : samples) {
        lo = std::min(lo, s[static_cast<std::size_t>(component)]);
        hi = std::max(hi, s[static_cast<std::size_t>(component)]);
    }
    if (lo == hi) {  // degenerate archive: widen so every sample lands in a bin
        lo -= 0.5;
        hi += 0.5;
    }
    return {lo, hi};
}

std::vector<double> make_edges(double lo, double hi, int bins) {
    std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b) edges[static_cast<std::size_t>(b)] = lo + (hi - lo) * b / bins;
    return edges;
}

int bin_of(double v, double lo, double hi, int bins) {
    const int b = static_cast<int>((v - lo) / (hi - lo) * bins);
    return std::clamp(b, 0, bins - 1);
}

void check_histogram_args(const std::vector<std::vector<double>>& samples, int component,
                          int bins) {
    if (samples.empty()) throw std::invalid_argument("histogram: empty archive");
    if (bins < 1) throw std::invalid_argument("histogram: bins must be >= 1");
    if (component < 0 || component >= static_cast<int>(samples[0].size()))
        throw std::out_of_range("histogram: component index out of range");
}

}  // namespace

Histogram1d histogram(const std::vector<std::vector<double>>& samples, int component, int bins) {
    check_histogram_args(samples, component, bins);
    const auto [lo, hi] = component_range(samples, component);
    Histogram1d h;
    h.edges = make_edges(lo, hi, bins);
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    for (const auto& s : samples)
        ++h.counts[static_cast<std::size_t>(
            bin_of(s[static_cast<std::size_t>(component)], lo, hi, bins))];
    return h;
}

Histogram2d histogram2d(const std::vector<std::vector<double>>& samples, int component_x,
                        int component_y, int bins) {
    check_histogram_args(samples, component_x, bins);
    check_histogram_args(samples, component_y, bins);
    const auto [xlo, xhi] = component_range(samples, component_x);
    const auto [ylo, yhi] = component_range(samples, component_y);
    Histogram2d h;
    h.bins = bins;
    h.x_edges = make_edges(xlo, xhi, bins);
    h.y_edges = make_edges(ylo, yhi, bins);
    h.counts.assign(static_cast<std::size_t>(bins) * bins, 0);
    for (const auto& s : samples) {
        const int bx = bin_of(s[static_cast<std::size_t>(component_x)], xlo, xhi, bins);
        const int by = bin_of(s[static_cast<std::size_t>(component_y)], ylo, yhi, bins);
        ++h.counts[static_cast<std::size_t>(bx) * bins + by];
    }
    return h;
}

}  // namespace scalarmc
