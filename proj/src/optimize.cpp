#include "scalarmc/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace scalarmc {

namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

double guarded(const Objective& objective, std::span<const double> x) {
    const double v = objective(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

double simplex_diameter(const std::vector<std::vector<double>>& vertices) {
    double d = 0.0;
    for (std::size_t i = 1; i < vertices.size(); ++i) {
        double s = 0.0;
        for (std::size_t c = 0; c < vertices[i].size(); ++c) {
            const double diff = vertices[i][c] - vertices[0][c];
            s += diff * diff;
        }
        d = std::max(d, std::sqrt(s));
    }
    return d;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& objective, std::span<const double> x0,
                             const NelderMeadOptions& options) {
    const std::size_t dim = x0.size();
    if (dim == 0) throw std::invalid_argument("nelder_mead: empty start point");
    for (double v : x0)
        if (!std::isfinite(v)) throw std::invalid_argument("nelder_mead: non-finite start point");

    // Initial simplex: x0 plus one per-coordinate step.
    std::vector<std::vector<double>> vertices(dim + 1, std::vector<double>(x0.begin(), x0.end()));
    for (std::size_t i = 0; i < dim; ++i) vertices[i + 1][i] += options.initial_step;
    std::vector<double> values(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) values[i] = guarded(objective, vertices[i]);

    auto sort_simplex = [&]() {
        std::vector<std::size_t> order(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        std::vector<std::vector<double>> sv(dim + 1);
        std::vector<double> sf(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) {
            sv[i] = std::move(vertices[order[i]]);
            sf[i] = values[order[i]];
        }
        vertices = std::move(sv);
        values = std::move(sf);
    };
    sort_simplex();

    NelderMeadResult result;
    result.trace.push_back({0, values[0], vertices[0]});

    int iter = 0;
    std::string reason = "max_iter";
    for (; iter < options.max_iter; ++iter) {
        if (simplex_diameter(vertices) < options.x_tol) {
            reason = "x_tol";
            break;
        }
        if (std::isfinite(values[dim]) && values[dim] - values[0] < options.f_tol) {
            reason = "f_tol";
            break;
        }

        // Centroid of all vertices but the worst.
        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t c = 0; c < dim; ++c) centroid[c] += vertices[i][c] / double(dim);

        auto along = [&](double t) {
            std::vector<double> p(dim);
            for (std::size_t c = 0; c < dim; ++c)
                p[c] = centroid[c] + t * (centroid[c] - vertices[dim][c]);
            return p;
        };

        const auto reflected = along(kReflect);
        const double f_reflected = guarded(objective, reflected);

        if (f_reflected < values[0]) {
            const auto expanded = along(kExpand);
            const double f_expanded = guarded(objective, expanded);
            if (f_expanded < f_reflected) {
                vertices[dim] = expanded;
                values[dim] = f_expanded;
            } else {
                vertices[dim] = reflected;
                values[dim] = f_reflected;
            }
        } else if (f_reflected < values[dim - 1]) {
            vertices[dim] = reflected;
            values[dim] = f_reflected;
        } else {
            // Contract toward the better of worst/reflected.
            const bool outside = f_reflected < values[dim];
            const auto contracted = along(outside ? kContract : -kContract);
            const double f_contracted = guarded(objective, contracted);
            if (f_contracted < std::min(values[dim], f_reflected)) {
                vertices[dim] = contracted;
                values[dim] = f_contracted;
            } else {
                for (std::size_t i = 1; i <= dim; ++i) {
                    for (std::size_t c = 0; c < dim; ++c)
                        vertices[i][c] = vertices[0][c] + kShrink * (vertices[i][c] - vertices[0][c]);
                    values[i] = guarded(objective, vertices[i]);
                }
            }
        }
        sort_simplex();
        result.trace.push_back({iter + 1, values[0], vertices[0]});
    }

    result.argmin = vertices[0];
    result.min_value = values[0];
    result.iterations = iter;
    result.stop_reason = reason;
    return result;
}

void ForcingControl::validate() const {
    if (centers.empty()) throw std::invalid_argument("ForcingControl: no forcing centers");
    if (initial_amplitudes.size() != centers.size())
        throw std::invalid_argument("ForcingControl: amplitude/center count mismatch");
    if (target.size() != observation_points.size())
        throw std::invalid_argument("ForcingControl: target and observation lengths must match");
    if (!(sharpness > 0.0)) throw std::invalid_argument("ForcingControl: sharpness must be positive");
}

namespace {

BvpProblemSpec control_spec(const ForcingControl& control, const BvpProblemSpec& base,
                            std::span<const double> amplitudes) {
    BvpProblemSpec spec = base;
    std::vector<ScalarField::Bump> bumps;
    bumps.reserve(control.centers.size());
    for (std::size_t j = 0; j < control.centers.size(); ++j)
        bumps.push_back({amplitudes[j], control.centers[j]});
    spec.forcing = ScalarField::gaussian_bumps(std::move(bumps), control.sharpness);
    spec.observations = control.observation_points;
    return spec;
}

}  // namespace

double forcing_cost(std::span<const double> amplitudes, const ForcingControl& control,
                    const BvpProblemSpec& base, std::uint64_t seed, int workers) {
    control.validate();
    if (amplitudes.size() != control.centers.size())
        throw std::invalid_argument("forcing_cost: amplitude count mismatch");
    const auto estimates = observe_bvp(control_spec(control, base, amplitudes), seed, workers);
    double ss = 0.0;
    for (std::size_t j = 0; j < control.target.size(); ++j) {
        const double r = control.target[j] - estimates[j].mean;
        ss += r * r;
    }
    return std::sqrt(ss);
}

NelderMeadResult optimize_forcing(const ForcingControl& control, const BvpProblemSpec& base,
                                  const NelderMeadOptions& options, std::uint64_t seed,
                                  int workers) {
    control.validate();
    auto objective = [&](std::span<const double> F) {
        return forcing_cost(F, control, base, seed, workers);
    };
    return nelder_mead(objective, control.initial_amplitudes, options);
}

}  // namespace scalarmc
