#include "scalarmc/fd_bvp.hpp"

#include <Eigen/Sparse>
#include <Eigen/IterativeLinearSolvers>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scalarmc {

double FdSolution::value_at(Point2 x) const {
    const double h1 = (upper.x1 - lower.x1) / (n - 1);
    const double h2 = (upper.x2 - lower.x2) / (n - 1);
    const double s = std::clamp((x.x1 - lower.x1) / h1, 0.0, double(n - 1));
    const double t = std::clamp((x.x2 - lower.x2) / h2, 0.0, double(n - 1));
    const int i = std::min(static_cast<int>(s), n - 2);
    const int j = std::min(static_cast<int>(t), n - 2);
    const double a = s - i;
    const double b = t - j;
    const auto at = [&](int ii, int jj) { return values[static_cast<std::size_t>(ii) * n + jj]; };
    return (1 - a) * (1 - b) * at(i, j) + a * (1 - b) * at(i + 1, j) +
           (1 - a) * b * at(i, j + 1) + a * b * at(i + 1, j + 1);
}

FdSolution fd_solve_bvp(const BvpProblemSpec& spec, int n) {
    spec.validate();
    if (n < 33) throw std::invalid_argument("fd_solve_bvp: n must be >= 33");
    const auto* box = spec.domain.as_box();
    if (!box) throw std::invalid_argument("fd_solve_bvp: box domain required");
    if (!spec.diffusion.is_isotropic())
        throw std::invalid_argument("fd_solve_bvp: isotropic diffusion required");
    const double kappa = spec.diffusion.kappa();

    const double h1 = (box->upper.x1 - box->lower.x1) / (n - 1);
    const double h2 = (box->upper.x2 - box->lower.x2) / (n - 1);
    const auto idx = [n](int i, int j) { return i * n + j; };
    const auto node = [&](int i, int j) -> Point2 {
        return {box->lower.x1 + i * h1, box->lower.x2 + j * h2};
    };

    // Discretize the transport form v . grad theta - kappa Lap theta = -f with
    // upwinding against v; boundary rows are identity rows.
    const int total = n * n;
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(total) * 5);
    Eigen::VectorXd rhs(total);

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int row = idx(i, j);
            const Point2 x = node(i, j);
            if (i == 0 || i == n - 1 || j == 0 || j == n - 1) {
                triplets.emplace_back(row, row, 1.0);
                rhs[row] = spec.boundary_data(x);
                continue;
            }
            const Vec2 v = spec.velocity(x);
            double center = 2.0 * kappa / (h1 * h1) + 2.0 * kappa / (h2 * h2);
            double west = -kappa / (h1 * h1), east = -kappa / (h1 * h1);
            double south = -kappa / (h2 * h2), north = -kappa / (h2 * h2);
            if (v.x1 >= 0.0) {
                center += v.x1 / h1;
                west -= v.x1 / h1;
            } else {
                center -= v.x1 / h1;
                east += v.x1 / h1;
            }
            if (v.x2 >= 0.0) {
                center += v.x2 / h2;
                south -= v.x2 / h2;
            } else {
                center -= v.x2 / h2;
                north += v.x2 / h2;
            }
            triplets.emplace_back(row, idx(i - 1, j), west);
            triplets.emplace_back(row, idx(i + 1, j), east);
            triplets.emplace_back(row, idx(i, j - 1), south);
            triplets.emplace_back(row, idx(i, j + 1), north);
            triplets.emplace_back(row, row, center);
            rhs[row] = -spec.forcing(x);
        }
    }

    Eigen::SparseMatrix<double> A(total, total);
    A.setFromTriplets(triplets.begin(), triplets.end());

    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> solver;
    solver.setTolerance(1e-12);
    solver.setMaxIterations(20000);
    solver.compute(A);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("fd_solve_bvp: preconditioner setup failed (singular system?)");
    const Eigen::VectorXd sol = solver.solve(rhs);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("fd_solve_bvp: linear solver did not converge");

    FdSolution out;
    out.n = n;
    out.lower = box->lower;
    out.upper = box->upper;
    out.values.assign(sol.data(), sol.data() + total);
    out.observation_values.reserve(spec.observations.size());
    for (const auto& x : spec.observations) out.observation_values.push_back(out.value_at(x));
    return out;
}

}  // namespace scalarmc
