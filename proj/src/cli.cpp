#include "scalarmc/cli.hpp"

#include <CLI11.hpp>

#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "scalarmc/benchmark.hpp"
#include "scalarmc/config.hpp"
#include "scalarmc/fd_bvp.hpp"
#include "scalarmc/galerkin.hpp"
#include "scalarmc/io.hpp"

namespace scalarmc {

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::int64_t seed = -1;   // -1: take the config's seed
    int workers = -1;         // -1: env / config / hardware
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_out = true) {
    cmd->add_option("--config", opts.config_path, "run configuration file (JSON)")->required();
    auto* out = cmd->add_option("--out", opts.out_path, "output file");
    if (needs_out) out->required();
    cmd->add_option("--seed", opts.seed, "seed override");
    cmd->add_option("--workers", opts.workers, "worker thread count (0 = hardware)");
    cmd->add_option("--format", opts.format, "record format: csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
}

// Precedence: --workers flag, then SCALARMC_WORKERS, then the config value.
int effective_workers(const CommonOpts& opts, const RunConfig& cfg) {
    if (opts.workers >= 0) return resolve_workers(opts.workers);
    if (const char* env = std::getenv("SCALARMC_WORKERS")) {
        try {
            return resolve_workers(std::stoi(env));
        } catch (const std::exception&) {
            throw ConfigError("SCALARMC_WORKERS", "not an integer");
        }
    }
    return resolve_workers(cfg.workers);
}

std::uint64_t effective_seed(const CommonOpts& opts, const RunConfig& cfg) {
    return opts.seed >= 0 ? static_cast<std::uint64_t>(opts.seed) : cfg.seed;
}

std::ofstream open_output(const std::string& path) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

int cmd_forward_ad(const CommonOpts& opts) {
    const RunConfig cfg = load_config(opts.config_path);
    const AdProblemSpec spec = make_ad_spec(cfg);
    const auto estimates = observe_ad(spec, effective_seed(opts, cfg), effective_workers(opts, cfg));

    auto out = open_output(opts.out_path);
    RecordWriter writer(out, parse_record_format(opts.format),
                        {"t", "x1", "x2", "mean", "std_error", "n_particles", "n_failed"});
    for (std::size_t j = 0; j < estimates.size(); ++j) {
        const auto& o = spec.observations[j];
        const auto& e = estimates[j];
        writer.write_row(std::array{o.t, o.x.x1, o.x.x2, e.mean, e.std_error,
                                    double(e.n_particles), double(e.n_failed)});
    }
    return 0;
}

int cmd_forward_bvp(const CommonOpts& opts) {
    const RunConfig cfg = load_config(opts.config_path);
    const BvpProblemSpec spec = make_bvp_spec(cfg);
    const auto estimates =
        observe_bvp(spec, effective_seed(opts, cfg), effective_workers(opts, cfg));

    auto out = open_output(opts.out_path);
    RecordWriter writer(out, parse_record_format(opts.format),
                        {"x1", "x2", "mean", "std_error", "mean_exit_time", "n_failed"});
    for (std::size_t j = 0; j < estimates.size(); ++j) {
        const auto& x = spec.observations[j];
        const auto& e = estimates[j];
        writer.write_row(std::array{x.x1, x.x2, e.mean, e.std_error, e.aux_mean,
                                    double(e.n_failed)});
    }
    return 0;
}

int cmd_reference(const CommonOpts& opts, const std::string& method) {
    const RunConfig cfg = load_config(opts.config_path);
    const ReferenceSection ref = cfg.reference.value_or(ReferenceSection{});

    auto out = open_output(opts.out_path);
    RecordWriter grid_writer(out, parse_record_format(opts.format), {"x1", "x2", "value"});
    RecordWriter obs_writer(std::cout, parse_record_format(opts.format),
                            {"obs", "x1", "x2", "value"});

    if (method == "galerkin") {
        const AdProblemSpec spec = make_ad_spec(cfg);
        const double dt_ref = ref.dt_ref > 0.0 ? ref.dt_ref : spec.resolved_dt() / 10.0;
        const auto result = galerkin_solve_ad(spec, ref.galerkin_cutoff, dt_ref);
        const int n = ref.field_grid;
        const auto field = galerkin_field_grid(result, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                grid_writer.write_row(std::array{double(i) / n, double(j) / n,
                                                 field[std::size_t(i) * n + j]});
        for (std::size_t j = 0; j < result.observation_values.size(); ++j)
            obs_writer.write_row(std::array{double(j), spec.observations[j].x.x1,
                                            spec.observations[j].x.x2,
                                            result.observation_values[j]});
        return 0;
    }
    if (method == "fd") {
        const BvpProblemSpec spec = make_bvp_spec(cfg);
        const auto sol = fd_solve_bvp(spec, ref.fd_grid);
        const double h1 = (sol.upper.x1 - sol.lower.x1) / (sol.n - 1);
        const double h2 = (sol.upper.x2 - sol.lower.x2) / (sol.n - 1);
        for (int i = 0; i < sol.n; ++i)
            for (int j = 0; j < sol.n; ++j)
                grid_writer.write_row(std::array{sol.lower.x1 + i * h1, sol.lower.x2 + j * h2,
                                                 sol.values[std::size_t(i) * sol.n + j]});
        for (std::size_t j = 0; j < sol.observation_values.size(); ++j)
            obs_writer.write_row(std::array{double(j), spec.observations[j].x1,
                                            spec.observations[j].x2,
                                            sol.observation_values[j]});
        return 0;
    }
    throw ConfigError("--method", "expected \"galerkin\" or \"fd\"");
}

int cmd_sample(const CommonOpts& opts, std::int64_t steps_override, double beta_override) {
    const RunConfig cfg = load_config(opts.config_path);
    if (!cfg.prior) throw ConfigError("prior", "section required by `sample`");
    const PriorSpec prior = *cfg.prior;
    LikelihoodSpec likelihood = make_likelihood(cfg);
    likelihood.workers = effective_workers(opts, cfg);

    McmcSection mc = cfg.mcmc.value_or(McmcSection{});
    if (steps_override >= 0) mc.steps = steps_override;
    if (beta_override > 0.0) mc.beta = beta_override;

    ChainConfig chain_cfg{mc.steps, mc.beta, mc.burn_in, mc.thin, effective_seed(opts, cfg)};
    const ChainResult result = run_chain(chain_cfg, prior, &likelihood);

    std::filesystem::create_directories(opts.out_path);
    const auto fmt = parse_record_format(opts.format);
    const int dim = prior.dimension();

    std::vector<std::string> archive_cols = {"iteration", "phi"};
    for (int c = 0; c < dim; ++c) archive_cols.push_back("u" + std::to_string(c));
    {
        auto out = open_output(opts.out_path + "/archive." + opts.format);
        RecordWriter writer(out, fmt, archive_cols);
        std::vector<double> row(archive_cols.size());
        for (std::size_t s = 0; s < result.samples.size(); ++s) {
            const auto iter = chain_cfg.burn_in + std::int64_t(s) * chain_cfg.thin + 1;
            row[0] = double(iter);
            row[1] = result.phi_trace[std::size_t(iter - 1)];
            for (int c = 0; c < dim; ++c) row[std::size_t(c) + 2] = result.samples[s][std::size_t(c)];
            writer.write_row(row);
        }
    }
    {
        auto out = open_output(opts.out_path + "/map." + opts.format);
        std::vector<std::string> cols;
        for (int c = 0; c < dim; ++c) cols.push_back("u" + std::to_string(c));
        RecordWriter writer(out, fmt, cols);
        writer.write_row(result.map_u);
    }
    {
        auto out = open_output(opts.out_path + "/summary." + opts.format);
        RecordWriter writer(out, fmt,
                            {"steps", "acceptance_rate", "map_objective", "final_phi",
                             "flagged_failures", "samples"});
        writer.write_row(std::array{double(mc.steps), result.acceptance_rate,
                                    result.map_objective, result.final_state.phi,
                                    double(result.final_state.flagged_failures),
                                    double(result.samples.size())});
    }
    std::cout << "acceptance_rate " << format_double(result.acceptance_rate) << "\n"
              << "map_objective " << format_double(result.map_objective) << "\n"
              << "samples " << result.samples.size() << "\n";
    return 0;
}

int cmd_optimize(const CommonOpts& opts) {
    const RunConfig cfg = load_config(opts.config_path);
    const BvpProblemSpec base = make_bvp_spec(cfg);
    const ForcingControl control = make_forcing_control(cfg);
    const auto result = optimize_forcing(control, base, cfg.optimize->options,
                                         effective_seed(opts, cfg), effective_workers(opts, cfg));

    auto out = open_output(opts.out_path);
    std::vector<std::string> cols = {"iteration", "best_cost"};
    for (std::size_t c = 0; c < control.centers.size(); ++c) cols.push_back("f" + std::to_string(c));
    RecordWriter writer(out, parse_record_format(opts.format), cols);
    std::vector<double> row(cols.size());
    for (const auto& entry : result.trace) {
        row[0] = double(entry.iteration);
        row[1] = entry.best_value;
        for (std::size_t c = 0; c < control.centers.size(); ++c) row[c + 2] = entry.best_point[c];
        writer.write_row(row);
    }
    std::cout << "best_cost " << format_double(result.min_value) << "\n"
              << "iterations " << result.iterations << " (" << result.stop_reason << ")\n"
              << "amplitudes";
    for (double f : result.argmin) std::cout << ' ' << format_double(f);
    std::cout << "\n";
    return 0;
}

int cmd_benchmark(const CommonOpts& opts) {
    const RunConfig cfg = load_config(opts.config_path);
    if (!cfg.benchmark) throw ConfigError("benchmark", "section required by `benchmark`");
    BenchmarkConfig bench = cfg.benchmark->config;
    bench.seed = effective_seed(opts, cfg);
    const auto report = benchmark_scaling(bench, effective_workers(opts, cfg));

    auto out = open_output(opts.out_path);
    RecordWriter writer(out, parse_record_format(opts.format),
                        {"cutoff", "n_unknowns", "n_basis", "particle_seconds",
                         "reference_seconds", "particle_jitter", "reference_jitter",
                         "jitter_flagged", "basis_eval_seconds", "predicted_ratio"});
    for (const auto& row : report.rows) {
        writer.write_row(std::array{double(row.cutoff), double(row.n_unknowns),
                                    double(row.n_basis), row.particle_seconds,
                                    row.reference_seconds, row.particle_jitter,
                                    row.reference_jitter, row.jitter_flagged ? 1.0 : 0.0,
                                    row.basis_eval_seconds, row.predicted_ratio});
        if (row.jitter_flagged)
            std::cerr << "warning: timing jitter above 50% at cutoff " << row.cutoff << "\n";
    }
    std::cout << "particle_slope " << format_double(report.particle_slope) << "\n"
              << "reference_slope " << format_double(report.reference_slope) << "\n";
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"Backward-particle evaluation of sparse advection-diffusion observations"};
    app.require_subcommand(1);

    CommonOpts fwd_ad_opts, fwd_bvp_opts, ref_opts, sample_opts, opt_opts, bench_opts;
    std::string ref_method;
    std::int64_t sample_steps = -1;
    double sample_beta = -1.0;

    auto* fwd_ad = app.add_subcommand("forward-ad", "particle forward map, time-dependent problem");
    add_common(fwd_ad, fwd_ad_opts);

    auto* fwd_bvp = app.add_subcommand("forward-bvp", "particle forward map, Dirichlet problem");
    add_common(fwd_bvp, fwd_bvp_opts);

    auto* ref = app.add_subcommand("reference", "reference solver (full field + observations)");
    add_common(ref, ref_opts);
    ref->add_option("--method", ref_method, "galerkin or fd")
        ->required()
        ->check(CLI::IsMember({"galerkin", "fd"}));

    auto* sample = app.add_subcommand("sample", "pCN MCMC sampling of the posterior");
    add_common(sample, sample_opts);
    sample->add_option("--steps", sample_steps, "chain length override");
    sample->add_option("--beta", sample_beta, "pCN step size override");

    auto* opt = app.add_subcommand("optimize", "Nelder-Mead forcing optimization");
    add_common(opt, opt_opts);

    auto* bench = app.add_subcommand("benchmark", "particle vs reference cost scaling");
    add_common(bench, bench_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);  // also handles --help with exit code 0
    }

    try {
        if (fwd_ad->parsed()) return cmd_forward_ad(fwd_ad_opts);
        if (fwd_bvp->parsed()) return cmd_forward_bvp(fwd_bvp_opts);
        if (ref->parsed()) return cmd_reference(ref_opts, ref_method);
        if (sample->parsed()) return cmd_sample(sample_opts, sample_steps, sample_beta);
        if (opt->parsed()) return cmd_optimize(opt_opts);
        if (bench->parsed()) return cmd_benchmark(bench_opts);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace scalarmc
