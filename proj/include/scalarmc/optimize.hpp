#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "scalarmc/forward_bvp.hpp"

namespace scalarmc {

struct NelderMeadOptions {
    double x_tol = 1e-6;       // simplex diameter
    double f_tol = 1e-9;       // value spread across vertices
    int max_iter = 2000;
    double initial_step = 1.0; // per-coordinate offset of the initial simplex

    friend bool operator==(const NelderMeadOptions&, const NelderMeadOptions&) = default;
};

struct NelderMeadTraceEntry {
    int iteration = 0;
    double best_value = 0.0;
    std::vector<double> best_point;
};

struct NelderMeadResult {
    std::vector<double> argmin;
    double min_value = 0.0;
    int iterations = 0;
    std::string stop_reason;
    std::vector<NelderMeadTraceEntry> trace;
};

using Objective = std::function<double(std::span<const double>)>;

// Classical Nelder-Mead simplex search with coefficients
// (reflect 1, expand 2, contract 0.5, shrink 0.5). Non-finite objective
// values are treated as +infinity. Terminates when the simplex diameter falls
// below x_tol, the value spread falls below f_tol, or max_iter is reached.
NelderMeadResult nelder_mead(const Objective& objective, std::span<const double> x0,
                             const NelderMeadOptions& options = {});

// Forcing control problem: choose the bump amplitudes F so that the observed
// field values best match the targets.
struct ForcingControl {
    std::vector<double> initial_amplitudes;   // F start
    std::vector<Point2> centers;              // x_f
    double sharpness = 4.0;
    std::vector<double> target;               // Y
    std::vector<Point2> observation_points;   // x_obs

    void validate() const;
};

// |Y - G(F)|_2 with G evaluated by observe_bvp under a fixed seed, so the
// objective is deterministic across evaluations (common random numbers).
double forcing_cost(std::span<const double> amplitudes, const ForcingControl& control,
                    const BvpProblemSpec& base, std::uint64_t seed, int workers = 1);

NelderMeadResult optimize_forcing(const ForcingControl& control, const BvpProblemSpec& base,
                                  const NelderMeadOptions& options, std::uint64_t seed,
                                  int workers = 1);

}  // namespace scalarmc
