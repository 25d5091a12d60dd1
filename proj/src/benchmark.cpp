#include "scalarmc/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "scalarmc/forward_ad.hpp"
#include "scalarmc/galerkin.hpp"
#include "scalarmc/inference.hpp"

namespace scalarmc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TimingResult time_median(const std::function<void()>& thunk, int repetitions) {
    if (repetitions < 1) throw std::invalid_argument("time_median: repetitions must be >= 1");
    thunk();  // warm-up, discarded
    std::vector<double> times(static_cast<std::size_t>(repetitions));
    for (auto& t : times) {
        const auto t0 = Clock::now();
        thunk();
        t = seconds_since(t0);
    }
    std::sort(times.begin(), times.end());
    const double median = times[times.size() / 2];
    const double jitter = median > 0.0 ? (times.back() - times.front()) / median : 0.0;
    return {median, jitter};
}

BenchmarkReport benchmark_scaling(const BenchmarkConfig& config, int workers) {
    if (config.cutoffs.empty()) throw std::invalid_argument("benchmark: no cutoffs given");
    if (config.repetitions < 1) throw std::invalid_argument("benchmark: repetitions must be >= 1");

    BenchmarkReport report;
    std::vector<double> nu_axis, particle_times, reference_times;

    for (std::size_t tier = 0; tier < config.cutoffs.size(); ++tier) {
        const int cutoff = config.cutoffs[tier];
        BenchmarkRow row;
        row.cutoff = cutoff;
        row.n_unknowns = disk_mode_count(cutoff);
        row.n_basis = row.n_unknowns;

        const PriorSpec prior{cutoff, config.prior_s0, config.prior_alpha};
        NormalStream draw_rng(StreamKey{config.seed, 0xBE9C4ull, tier});
        const auto u = prior_draw(prior, draw_rng);
        const auto velocity = velocity_from_coefficients(prior, u);

        AdProblemSpec spec;
        spec.velocity = VelocityField::fourier(velocity);
        spec.diffusion = DiffusionModel::isotropic(config.kappa);
        spec.initial_condition = ScalarField::cosine_mode(1, 0, 1.0);
        spec.dt = config.dt;
        spec.n_particles = config.n_particles;
        for (int j = 0; j < config.n_observations; ++j) {
            const double frac = double(j + 1) / config.n_observations;
            spec.observations.push_back({config.t_final * frac, {0.5 * frac, 0.5 * frac}});
        }

        volatile double sink = 0.0;  // keep the timed work observable
        const auto particle = time_median(
            [&]() {
                const auto est = observe_ad(spec, config.seed, workers);
                sink = sink + est[0].mean;
            },
            config.repetitions);
        row.particle_seconds = particle.median_seconds;
        row.particle_jitter = particle.jitter;

        if (config.run_reference) {
            const GalerkinBasis basis{GalerkinBasis::Kind::disk, cutoff};
            const double radius = galerkin_spectral_radius(spec, basis);
            const double dt_ref = std::min(config.dt, 1.8 / radius);
            const auto reference = time_median(
                [&]() {
                    const auto ref = galerkin_solve_ad(spec, basis, dt_ref);
                    sink = sink + ref.observation_values[0];
                },
                config.repetitions);
            row.reference_seconds = reference.median_seconds;
            row.reference_jitter = reference.jitter;
        }

        // Measured C_b: wall time per velocity evaluation at this cutoff.
        {
            const int n_eval = 20000;
            const auto t0 = Clock::now();
            Vec2 acc{0.0, 0.0};
            for (int i = 0; i < n_eval; ++i) {
                const double s = double(i) / n_eval;
                acc = acc + velocity({s, 1.0 - s});
            }
            sink = sink + acc.x1;
            row.basis_eval_seconds = seconds_since(t0) / n_eval;
        }

        CostModel model;
        model.n_observations = config.n_observations;
        model.n_particles = config.n_particles;
        model.n_timesteps = static_cast<std::int64_t>(std::ceil(config.t_final / config.dt));
        model.n_unknowns = row.n_unknowns;
        model.n_basis = row.n_basis;
        model.basis_eval_cost = row.basis_eval_seconds / double(row.n_unknowns);
        model.parallel_width = workers;
        row.predicted_ratio = predict_cost_ratio(model);

        row.jitter_flagged = row.particle_jitter > 0.5 || row.reference_jitter > 0.5;
        report.rows.push_back(row);

        nu_axis.push_back(double(row.n_unknowns));
        particle_times.push_back(row.particle_seconds);
        if (config.run_reference) reference_times.push_back(row.reference_seconds);
    }

    if (report.rows.size() >= 2) {
        report.particle_slope = loglog_slope(nu_axis, particle_times);
        if (config.run_reference) report.reference_slope = loglog_slope(nu_axis, reference_times);
    }
    return report;
}

}  // namespace scalarmc
