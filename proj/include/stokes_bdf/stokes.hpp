#pragma once

#include "stokes_bdf/assembly.hpp"
#include "stokes_bdf/types.hpp"

#include <memory>
#include <vector>

namespace stokes_bdf {

struct SteadySolution {
    Vector u;
    Vector p;
    /// Multiplier of the mean-value row. Equals the net boundary flux of the
    /// imposed trace (plus the pressure-row data mean), so it vanishes iff the
    /// data are discretely compatible.
    double compatibility_residual = 0.0;
    /// ||S x - b|| / ||b|| on the constrained block system.
    double residual = 0.0;
};

/// Factorization of [[K, B, 0], [B^T, -J, m], [0, m^T, 0]] with the listed
/// velocity dofs eliminated. Solves are const and may run concurrently.
class SaddleSolver {
public:
    SaddleSolver(const StokesOperators& ops, const SparseMatrix& K, std::vector<int> fixed_dofs);
    ~SaddleSolver();
    SaddleSolver(SaddleSolver&&) noexcept;
    SaddleSolver& operator=(SaddleSolver&&) noexcept;

    /// rhs_u has the full velocity length; entries on fixed rows are ignored.
    /// fixed_values follow the order of fixed_dofs.
    [[nodiscard]] SteadySolution solve(const Vector& rhs_u, const Vector& rhs_p, const Vector& fixed_values) const;

    [[nodiscard]] int size() const;
    [[nodiscard]] const std::vector<int>& fixed_dofs() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

SteadySolution solve_steady(const StokesOperators& ops, const SparseMatrix& K, const Vector& rhs_u,
                            const Vector& rhs_p, const DirichletData& dirichlet);

/// Residual of b(q_h, u_h) - j_h(p_h, q_h) over mean-zero q_h, as a max norm
/// of the coefficient functional with its m-component removed.
double divergence_residual(const StokesOperators& ops, const Vector& u, const Vector& p);

/// Stokes Ritz projection with K = A, factorized once for repeated use.
class RitzProjector {
public:
    explicit RitzProjector(const StokesOperators& ops);

    /// Solves a(S_u, v) + b(S_p, v) = a(u, v) + b(p, v), b(q, S_u) - j(S_p, q) = 0,
    /// with S_u equal to the nodal trace of u on the boundary.
    [[nodiscard]] SteadySolution project(const std::function<Vec2(Point)>& u,
                                         const std::function<Mat2(Point)>& grad_u,
                                         const std::function<double(Point)>& p) const;

private:
    const StokesOperators* ops_;
    SaddleSolver solver_;
};

SteadySolution ritz_project(const StokesOperators& ops, const std::function<Vec2(Point)>& u,
                            const std::function<Mat2(Point)>& grad_u, const std::function<double(Point)>& p);

} // namespace stokes_bdf
