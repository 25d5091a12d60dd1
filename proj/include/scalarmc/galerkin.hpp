#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "scalarmc/forward_ad.hpp"

namespace scalarmc {

// Fourier basis set for the spectral reference solver on the unit torus.
// `box` keeps modes with max(|l1|,|l2|) <= cutoff; `disk` keeps |l|_2 <= cutoff
// (so the basis size equals the lattice count used to label unknown sizes).
struct GalerkinBasis {
    enum class Kind { box, disk };
    Kind kind = Kind::box;
    int cutoff = 8;
};

struct GalerkinResult {
    std::vector<double> observation_values;  // Re theta(t_j, x_j), one per observation
    std::vector<std::vector<std::complex<double>>> coefficients_at_observations;
    std::vector<std::complex<double>> final_coefficients;
    std::vector<std::pair<int, int>> basis_modes;  // ordering of the coefficient vectors
    double dt_used = 0.0;
    std::int64_t steps = 0;
};

// Reference solve of the time-dependent problem: project onto the Fourier
// basis, integrate the dense coefficient system with explicit Euler
// (Theta_i = (I + dt A) Theta_{i-1}), and evaluate the observations as
// sum_l Theta_l(t_j) exp(2 pi i l . x_j). Requires isotropic diffusion.
// Throws if dt_ref violates the explicit-Euler stability estimate
// (Gershgorin radius * dt_ref < 2), with a suggested dt_ref in the message.
GalerkinResult galerkin_solve_ad(const AdProblemSpec& spec, const GalerkinBasis& basis,
                                 double dt_ref);
GalerkinResult galerkin_solve_ad(const AdProblemSpec& spec, int box_cutoff, double dt_ref);

// Gershgorin estimate of the spectral radius of the assembled coefficient
// system; explicit Euler requires radius * dt_ref < 2.
double galerkin_spectral_radius(const AdProblemSpec& spec, const GalerkinBasis& basis);

// Evaluate the spectral solution on an n x n grid over [0,1)^2 (row-major,
// x2 varying fastest) from a coefficient vector in `basis_modes` order.
std::vector<double> galerkin_field_grid(const GalerkinResult& result, int n);

}  // namespace scalarmc
