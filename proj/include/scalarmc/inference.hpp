#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "scalarmc/forward_ad.hpp"
#include "scalarmc/rng.hpp"

namespace scalarmc {

struct ModeIndex {
    int k1 = 0;
    int k2 = 0;
};

// Gaussian prior on the velocity coefficients: independent N(0, s_k^2) on the
// real and imaginary parts of each stored +/-k representative, with spectrum
// s_k = s0 |k|^(-alpha). Draws satisfy the reality condition by construction.
struct PriorSpec {
    int cutoff = 8;     // K: modes with 0 < |k|_2 <= K
    double s0 = 1.0;
    double alpha = 2.5;

    // Canonical representatives in a fixed deterministic order.
    std::vector<ModeIndex> modes() const;
    // Per-component standard deviations, two entries (Re, Im) per mode.
    std::vector<double> component_stds() const;
    int dimension() const;  // 2 * number of stored modes

    void validate() const;

    friend bool operator==(const PriorSpec&, const PriorSpec&) = default;
};

std::vector<double> prior_draw(const PriorSpec& prior, NormalStream& rng);

// Velocity field from a coefficient vector in the prior's component order.
FourierVelocityField velocity_from_coefficients(const PriorSpec& prior,
                                                std::span<const double> u);

// 0.5 sum (u_i / s_i)^2, the prior norm term of the MAP objective.
double prior_norm(const PriorSpec& prior, std::span<const double> u);

// Gaussian observation likelihood Phi(u) = |y - G(u)|^2 / (2 sigma_n^2), with
// G evaluated by observe_ad under a fixed forward seed (common random numbers
// across evaluations).
struct LikelihoodSpec {
    std::vector<double> data;               // y
    double noise_std = 0.1;                 // sigma_n; infinity turns Phi off
    AdProblemSpec forward;                  // velocity slot replaced per evaluation
    std::uint64_t forward_seed = 0;
    int workers = 1;

    void validate() const;
    double misfit(const PriorSpec& prior, std::span<const double> u) const;  // Phi(u)
};

struct ChainState {
    std::vector<double> u;
    double phi = 0.0;
    std::int64_t iteration = 0;
    std::int64_t accepted = 0;
    std::int64_t flagged_failures = 0;      // forward-map failures (step rejected)
    std::vector<double> map_u;
    double map_objective = std::numeric_limits<double>::infinity();
};

// State at u0 with Phi(u0) evaluated (likelihood == nullptr means Phi == 0).
ChainState chain_init(const PriorSpec& prior, const LikelihoodSpec* likelihood,
                      std::vector<double> u0);

// One preconditioned Crank-Nicolson step: proposal sqrt(1-beta^2) u + beta xi
// with xi from the prior, accepted with probability min(1, exp(Phi - Phi')).
ChainState pcn_step(ChainState state, double beta, const PriorSpec& prior,
                    const LikelihoodSpec* likelihood, NormalStream& rng);

struct ChainConfig {
    std::int64_t n_steps = 10000;
    double beta = 0.02;
    std::int64_t burn_in = 0;
    std::int64_t thin = 1;
    std::uint64_t seed = 0;
};

struct ChainResult {
    std::vector<std::vector<double>> samples;  // thinned, post burn-in
    std::vector<double> phi_trace;             // one entry per iteration
    double acceptance_rate = 0.0;
    std::vector<double> map_u;
    double map_objective = 0.0;
    ChainState final_state;
};

ChainResult run_chain(const ChainConfig& config, const PriorSpec& prior,
                      const LikelihoodSpec* likelihood,
                      std::optional<std::vector<double>> u0 = std::nullopt);

struct Histogram1d {
    std::vector<double> edges;        // bins + 1 entries
    std::vector<std::int64_t> counts;
};
struct Histogram2d {
    std::vector<double> x_edges, y_edges;
    std::vector<std::int64_t> counts;  // row-major, x bin major
    int bins = 0;
};

Histogram1d histogram(const std::vector<std::vector<double>>& samples, int component, int bins);
Histogram2d histogram2d(const std::vector<std::vector<double>>& samples, int component_x,
                        int component_y, int bins);

}  // namespace scalarmc
