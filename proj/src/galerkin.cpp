#include "scalarmc/galerkin.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace scalarmc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
using Cvec = Eigen::VectorXcd;
using Cmat = Eigen::MatrixXcd;

std::vector<std::pair<int, int>> basis_mode_list(const GalerkinBasis& basis) {
    std::vector<std::pair<int, int>> modes;
    const int L = basis.cutoff;
    if (L < 1) throw std::invalid_argument("GalerkinBasis: cutoff must be >= 1");
    for (int k1 = -L; k1 <= L; ++k1) {
        for (int k2 = -L; k2 <= L; ++k2) {
            if (basis.kind == GalerkinBasis::Kind::disk &&
                double(k1) * k1 + double(k2) * k2 > double(L) * L)
                continue;
            modes.emplace_back(k1, k2);
        }
    }
    return modes;
}

// Project theta_0 onto the basis. Cosine series with integer torus modes and
// constants are placed exactly; anything else goes through trapezoidal
// quadrature on a uniform grid (spectrally accurate for smooth data).
Cvec project_initial_condition(const ScalarField& theta0,
                               const std::vector<std::pair<int, int>>& modes,
                               const std::map<std::pair<int, int>, Eigen::Index>& index_of,
                               int max_abs_mode) {
    Cvec theta = Cvec::Zero(static_cast<Eigen::Index>(modes.size()));

    auto place = [&](int k1, int k2, std::complex<double> c) {
        auto it = index_of.find({k1, k2});
        if (it != index_of.end()) theta[it->second] += c;  // outside cutoff: truncated
    };

    bool exact = false;
    if (theta0.kind() == ScalarField::Kind::constant) {
        place(0, 0, theta0.constant_value());
        exact = true;
    } else if (theta0.kind() == ScalarField::Kind::cosine) {
        exact = true;
        for (const auto& t : theta0.cosine_terms()) {
            const double k1d = t.freq.x1 / kTwoPi;
            const double k2d = t.freq.x2 / kTwoPi;
            const double r1 = std::round(k1d);
            const double r2 = std::round(k2d);
            if (std::abs(k1d - r1) > 1e-12 || std::abs(k2d - r2) > 1e-12) {
                exact = false;
                break;
            }
        }
        if (exact) {
            for (const auto& t : theta0.cosine_terms()) {
                const int k1 = static_cast<int>(std::lround(t.freq.x1 / kTwoPi));
                const int k2 = static_cast<int>(std::lround(t.freq.x2 / kTwoPi));
                // a cos(2 pi k.x + phi) = (a/2) e^{i phi} e_k + (a/2) e^{-i phi} e_{-k}
                const std::complex<double> half(0.5 * t.amplitude * std::cos(t.phase),
                                                0.5 * t.amplitude * std::sin(t.phase));
                if (k1 == 0 && k2 == 0) {
                    place(0, 0, 2.0 * half.real());
                } else {
                    place(k1, k2, half);
                    place(-k1, -k2, std::conj(half));
                }
            }
        }
    }
    if (exact) return theta;

    // Quadrature: Theta_l = (1/n^2) sum f(x_jk) e^{-2 pi i l.x_jk}
    const int n = std::max(128, 4 * (max_abs_mode + 1));
    std::vector<double> samples(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            samples[static_cast<std::size_t>(j) * n + k] =
                theta0({double(j) / n, double(k) / n});
    for (std::size_t m = 0; m < modes.size(); ++m) {
        const auto [l1, l2] = modes[m];
        std::complex<double> acc = 0.0;
        for (int j = 0; j < n; ++j) {
            std::complex<double> row = 0.0;
            for (int k = 0; k < n; ++k) {
                const double ph = -kTwoPi * (double(l1) * j / n + double(l2) * k / n);
                row += samples[static_cast<std::size_t>(j) * n + k] *
                       std::complex<double>(std::cos(ph), std::sin(ph));
            }
            acc += row;
        }
        theta[static_cast<Eigen::Index>(m)] = acc / double(n) / double(n);
    }
    return theta;
}

// Dense coefficient system A_lm = -vhat_{l-m} . (2 pi i m) - delta_lm kappa
// (2 pi |l|)^2, assembled densely so the time loop costs N_t * N_b^2.
Cmat assemble_system(const AdProblemSpec& spec, const std::vector<std::pair<int, int>>& modes) {
    const double kappa = spec.diffusion.kappa();
    const auto nb = static_cast<Eigen::Index>(modes.size());
    Cmat A = Cmat::Zero(nb, nb);
    const std::complex<double> i2pi(0.0, kTwoPi);
    if (spec.velocity.is_constant()) {
        const Vec2 v = spec.velocity.constant_value();
        for (Eigen::Index l = 0; l < nb; ++l) {
            const auto [l1, l2] = modes[static_cast<std::size_t>(l)];
            A(l, l) -= i2pi * (v.x1 * double(l1) + v.x2 * double(l2));
        }
    } else {
        std::map<std::pair<int, int>, std::array<std::complex<double>, 2>> vhat;
        for (const auto& c : spec.velocity.fourier_field().vector_coefficients())
            vhat[{c.k1, c.k2}] = {c.c1, c.c2};
        for (Eigen::Index l = 0; l < nb; ++l) {
            const auto [l1, l2] = modes[static_cast<std::size_t>(l)];
            for (Eigen::Index m = 0; m < nb; ++m) {
                const auto [m1, m2] = modes[static_cast<std::size_t>(m)];
                const auto it = vhat.find({l1 - m1, l2 - m2});
                if (it == vhat.end()) continue;
                A(l, m) -= (it->second[0] * double(m1) + it->second[1] * double(m2)) * i2pi;
            }
        }
    }
    for (Eigen::Index l = 0; l < nb; ++l) {
        const auto [l1, l2] = modes[static_cast<std::size_t>(l)];
        const double ksq = kTwoPi * kTwoPi * (double(l1) * l1 + double(l2) * l2);
        A(l, l) -= kappa * ksq;
    }
    return A;
}

void check_galerkin_inputs(const AdProblemSpec& spec) {
    spec.validate();
    if (!spec.diffusion.is_isotropic())
        throw std::invalid_argument("galerkin_solve_ad: isotropic diffusion required");
}

}  // namespace

double galerkin_spectral_radius(const AdProblemSpec& spec, const GalerkinBasis& basis) {
    check_galerkin_inputs(spec);
    const auto modes = basis_mode_list(basis);
    const Cmat A = assemble_system(spec, modes);
    return A.cwiseAbs().rowwise().sum().maxCoeff();
}

GalerkinResult galerkin_solve_ad(const AdProblemSpec& spec, const GalerkinBasis& basis,
                                 double dt_ref) {
    check_galerkin_inputs(spec);
    if (!(dt_ref > 0.0)) throw std::invalid_argument("galerkin_solve_ad: dt_ref must be positive");

    const auto modes = basis_mode_list(basis);
    const auto nb = static_cast<Eigen::Index>(modes.size());
    std::map<std::pair<int, int>, Eigen::Index> index_of;
    for (Eigen::Index i = 0; i < nb; ++i) index_of[modes[static_cast<std::size_t>(i)]] = i;
    int max_abs = 0;
    for (const auto& [k1, k2] : modes) max_abs = std::max({max_abs, std::abs(k1), std::abs(k2)});

    const Cmat A = assemble_system(spec, modes);

    // Explicit-Euler stability estimate (Gershgorin radius).
    const double radius = A.cwiseAbs().rowwise().sum().maxCoeff();
    if (radius * dt_ref >= 2.0) {
        std::ostringstream msg;
        msg << "galerkin_solve_ad: dt_ref " << dt_ref
            << " violates the stability estimate; suggest dt_ref <= " << 1.8 / radius;
        throw std::runtime_error(msg.str());
    }

    Cvec theta = project_initial_condition(spec.initial_condition, modes, index_of, max_abs);

    // Integrate once through the sorted observation times, shortening steps to
    // land exactly on each t_j.
    std::vector<std::size_t> order(spec.observations.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return spec.observations[a].t < spec.observations[b].t;
    });

    GalerkinResult result;
    result.basis_modes = modes;
    result.dt_used = dt_ref;
    result.observation_values.resize(spec.observations.size());
    result.coefficients_at_observations.resize(spec.observations.size());

    Cvec scratch(nb);
    double t = 0.0;
    std::int64_t steps = 0;
    for (std::size_t oi : order) {
        const double t_target = spec.observations[oi].t;
        while (t < t_target - 1e-15) {
            const double dt = std::min(dt_ref, t_target - t);
            scratch.noalias() = A * theta;
            theta += dt * scratch;
            t += dt;
            ++steps;
        }
        const Point2 x = spec.observations[oi].x;
        std::complex<double> val = 0.0;
        for (Eigen::Index l = 0; l < nb; ++l) {
            const auto [l1, l2] = modes[static_cast<std::size_t>(l)];
            const double ph = kTwoPi * (double(l1) * x.x1 + double(l2) * x.x2);
            val += theta[l] * std::complex<double>(std::cos(ph), std::sin(ph));
        }
        result.observation_values[oi] = val.real();
        result.coefficients_at_observations[oi].assign(theta.data(), theta.data() + nb);
    }
    result.final_coefficients.assign(theta.data(), theta.data() + nb);
    result.steps = steps;
    return result;
}

GalerkinResult galerkin_solve_ad(const AdProblemSpec& spec, int box_cutoff, double dt_ref) {
    return galerkin_solve_ad(spec, GalerkinBasis{GalerkinBasis::Kind::box, box_cutoff}, dt_ref);
}

std::vector<double> galerkin_field_grid(const GalerkinResult& result, int n) {
    if (n < 2) throw std::invalid_argument("galerkin_field_grid: n must be >= 2");
    std::vector<double> grid(static_cast<std::size_t>(n) * n, 0.0);
    for (std::size_t m = 0; m < result.basis_modes.size(); ++m) {
        const auto [l1, l2] = result.basis_modes[m];
        const std::complex<double> c = result.final_coefficients[m];
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double ph = kTwoPi * (double(l1) * i / n + double(l2) * j / n);
                grid[static_cast<std::size_t>(i) * n + j] +=
                    (c * std::complex<double>(std::cos(ph), std::sin(ph))).real();
            }
        }
    }
    return grid;
}

}  // namespace scalarmc
