#pragma once

#include <vector>

#include "scalarmc/forward_bvp.hpp"

namespace scalarmc {

// Finite-difference solution of the Dirichlet problem on a box grid.
struct FdSolution {
    int n = 0;                    // nodes per side (including boundary)
    Point2 lower, upper;
    std::vector<double> values;   // row-major: values[i * n + j] at (x1_i, x2_j)
    std::vector<double> observation_values;

    double value_at(Point2 x) const;  // bilinear interpolation
};

// Solves -v . grad theta + kappa Lap theta = f with theta = theta_bc on the
// boundary: second-order central differences for the Laplacian, first-order
// upwind for the advection, boundary rows pinned to the data. Requires a box
// domain, isotropic diffusion, and n >= 33.
FdSolution fd_solve_bvp(const BvpProblemSpec& spec, int n);

}  // namespace scalarmc
