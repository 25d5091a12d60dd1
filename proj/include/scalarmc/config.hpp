#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "scalarmc/benchmark.hpp"
#include "scalarmc/forward_ad.hpp"
#include "scalarmc/forward_bvp.hpp"
#include "scalarmc/inference.hpp"
#include "scalarmc/optimize.hpp"

namespace scalarmc {

// Malformed or invalid run configuration; `where` is a JSON path or a
// line/column position for parse errors.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& where, const std::string& what)
        : std::runtime_error(where + ": " + what) {}
};

enum class ProblemKind { ad, bvp };

struct McmcSection {
    std::int64_t steps = 10000;
    double beta = 0.02;
    std::int64_t burn_in = 0;
    std::int64_t thin = 1;

    friend bool operator==(const McmcSection&, const McmcSection&) = default;
};

struct LikelihoodSection {
    std::vector<double> data;
    double noise_std = -1.0;  // <= 0: 0.1 * RMS of the data
    std::uint64_t forward_seed = 0;

    friend bool operator==(const LikelihoodSection&, const LikelihoodSection&) = default;
};

struct OptimizeSection {
    std::vector<Point2> centers;
    double sharpness = 4.0;
    std::vector<double> target;
    std::vector<double> initial;
    NelderMeadOptions options;

    friend bool operator==(const OptimizeSection&, const OptimizeSection&) = default;
};

struct ReferenceSection {
    int galerkin_cutoff = 16;
    double dt_ref = -1.0;  // <= 0: dt / 10
    int fd_grid = 257;
    int field_grid = 101;

    friend bool operator==(const ReferenceSection&, const ReferenceSection&) = default;
};

struct BenchmarkSection {
    BenchmarkConfig config;

    friend bool operator==(const BenchmarkSection&, const BenchmarkSection&) = default;
};

// Full description of one run, mirroring the JSON config file.
struct RunConfig {
    ProblemKind problem = ProblemKind::ad;
    VelocityField velocity;
    double kappa = 0.0;
    ScalarField initial_condition;            // ad
    ScalarField forcing;                      // bvp
    ScalarField boundary_data;                // bvp
    Domain domain = Domain::box({0, 0}, {1, 1});  // bvp
    std::vector<AdObservation> ad_observations;
    std::vector<Point2> bvp_observations;
    std::int64_t particles = 10000;
    double dt = 0.0;  // <= 0: per-problem default rule
    StepScheme scheme = StepScheme::euler_maruyama;
    std::int64_t max_steps = 10'000'000;
    std::uint64_t seed = 0;
    int workers = 0;  // 0: hardware concurrency
    std::optional<PriorSpec> prior;
    std::optional<LikelihoodSection> likelihood;
    std::optional<McmcSection> mcmc;
    std::optional<OptimizeSection> optimize;
    std::optional<ReferenceSection> reference;
    std::optional<BenchmarkSection> benchmark;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);

AdProblemSpec make_ad_spec(const RunConfig& config);
BvpProblemSpec make_bvp_spec(const RunConfig& config);
LikelihoodSpec make_likelihood(const RunConfig& config);  // needs prior + likelihood sections
ForcingControl make_forcing_control(const RunConfig& config);

}  // namespace scalarmc
