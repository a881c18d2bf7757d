#include "stokes_bdf/stokes.hpp"

#include "stokes_bdf/errors.hpp"

#include <Eigen/UmfPackSupport>

#include <algorithm>
#include <mutex>

namespace stokes_bdf {

using Triplet = Eigen::Triplet<double>;

struct SaddleSolver::Impl {
    int nv = 0;
    int np = 0;
    std::vector<int> fixed;
    std::vector<int> reduced_index; // velocity dof -> reduced row, -1 when fixed
    SparseMatrix matrix;            // reduced block system
    SparseMatrix coupling;          // reduced rows x fixed velocity columns
    Eigen::UmfPackLU<SparseMatrix> lu;
    std::mutex solve_mutex; // the UMFPACK wrapper updates its info block on every solve
};

SaddleSolver::SaddleSolver(const StokesOperators& ops, const SparseMatrix& K, std::vector<int> fixed_dofs)
    : impl_(std::make_unique<Impl>())
{
    auto& s = *impl_;
    s.nv = static_cast<int>(ops.M.rows());
    s.np = static_cast<int>(ops.J.rows());
    if (K.rows() != s.nv || K.cols() != s.nv) {
        throw DimensionError("velocity block does not match the velocity space");
    }
    s.fixed = std::move(fixed_dofs);
    s.reduced_index.assign(static_cast<std::size_t>(s.nv), 0);
    std::vector<int> fixed_slot(static_cast<std::size_t>(s.nv), -1);
    for (std::size_t i = 0; i < s.fixed.size(); ++i) {
        const int d = s.fixed[i];
        if (d < 0 || d >= s.nv || fixed_slot[static_cast<std::size_t>(d)] >= 0) {
            throw DimensionError("invalid or repeated fixed velocity dof");
        }
        fixed_slot[static_cast<std::size_t>(d)] = static_cast<int>(i);
        s.reduced_index[static_cast<std::size_t>(d)] = -1;
    }
    int next = 0;
    for (auto& r : s.reduced_index) {
        if (r == 0) {
            r = next++;
        }
    }
    const int nfree = next;
    const int size = nfree + s.np + 1;
    const int lambda = size - 1;

    std::vector<Triplet> sys;
    std::vector<Triplet> cpl;
    sys.reserve(static_cast<std::size_t>(K.nonZeros() + 2 * ops.B.nonZeros() + ops.J.nonZeros() + 2 * s.np));
    auto velocity_entry = [&](int row, int col, double v) {
        // row, col are reduced rows/cols for the system or a fixed column
        const int c = s.reduced_index[static_cast<std::size_t>(col)];
        if (c >= 0) {
            sys.emplace_back(row, c, v);
        } else {
            cpl.emplace_back(row, fixed_slot[static_cast<std::size_t>(col)], v);
        }
    };
    for (int k = 0; k < K.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(K, k); it; ++it) {
            const int r = s.reduced_index[static_cast<std::size_t>(it.row())];
            if (r >= 0) {
                velocity_entry(r, static_cast<int>(it.col()), it.value());
            }
        }
    }
    for (int k = 0; k < ops.B.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(ops.B, k); it; ++it) {
            const int prow = nfree + static_cast<int>(it.col());
            const int r = s.reduced_index[static_cast<std::size_t>(it.row())];
            if (r >= 0) {
                sys.emplace_back(r, prow, it.value());
            }
            velocity_entry(prow, static_cast<int>(it.row()), it.value());
        }
    }
    for (int k = 0; k < ops.J.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(ops.J, k); it; ++it) {
            sys.emplace_back(nfree + static_cast<int>(it.row()), nfree + static_cast<int>(it.col()), -it.value());
        }
    }
    for (int j = 0; j < s.np; ++j) {
        sys.emplace_back(nfree + j, lambda, ops.mean_row[j]);
        sys.emplace_back(lambda, nfree + j, ops.mean_row[j]);
    }
    s.matrix.resize(size, size);
    s.matrix.setFromTriplets(sys.begin(), sys.end());
    s.matrix.makeCompressed();
    s.coupling.resize(size, static_cast<Eigen::Index>(s.fixed.size()));
    s.coupling.setFromTriplets(cpl.begin(), cpl.end());
    s.coupling.makeCompressed();

    s.lu.compute(s.matrix);
    if (s.lu.info() != Eigen::Success) {
        throw ConfigurationError("saddle-point factorization failed (singular block system)");
    }
}

SaddleSolver::~SaddleSolver() = default;
SaddleSolver::SaddleSolver(SaddleSolver&&) noexcept = default;
SaddleSolver& SaddleSolver::operator=(SaddleSolver&&) noexcept = default;

int SaddleSolver::size() const { return static_cast<int>(impl_->matrix.rows()); }

const std::vector<int>& SaddleSolver::fixed_dofs() const { return impl_->fixed; }

SteadySolution SaddleSolver::solve(const Vector& rhs_u, const Vector& rhs_p, const Vector& fixed_values) const
{
    const auto& s = *impl_;
    if (rhs_u.size() != s.nv || rhs_p.size() != s.np
        || fixed_values.size() != static_cast<Eigen::Index>(s.fixed.size())) {
        throw DimensionError("saddle solve: right-hand side size mismatch");
    }
    const int size = static_cast<int>(s.matrix.rows());
    const int nfree = size - s.np - 1;
    Vector b = Vector::Zero(size);
    for (int i = 0; i < s.nv; ++i) {
        const int r = s.reduced_index[static_cast<std::size_t>(i)];
        if (r >= 0) {
            b[r] = rhs_u[i];
        }
    }
    b.segment(nfree, s.np) = rhs_p;
    if (!s.fixed.empty()) {
        b -= s.coupling * fixed_values;
    }
    Vector x;
    {
        std::lock_guard<std::mutex> lock(impl_->solve_mutex);
        x = s.lu.solve(b);
    }
    if (!x.allFinite()) {
        throw ConfigurationError("saddle-point solve produced non-finite values");
    }
    SteadySolution out;
    out.u.resize(s.nv);
    for (int i = 0; i < s.nv; ++i) {
        const int r = s.reduced_index[static_cast<std::size_t>(i)];
        if (r >= 0) {
            out.u[i] = x[r];
        }
    }
    for (std::size_t i = 0; i < s.fixed.size(); ++i) {
        out.u[s.fixed[i]] = fixed_values[static_cast<Eigen::Index>(i)];
    }
    out.p = x.segment(nfree, s.np);
    out.compatibility_residual = x[size - 1];
    const double bnorm = b.norm();
    const double rnorm = (s.matrix * x - b).norm();
    out.residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
    return out;
}

SteadySolution solve_steady(const StokesOperators& ops, const SparseMatrix& K, const Vector& rhs_u,
                            const Vector& rhs_p, const DirichletData& dirichlet)
{
    const SaddleSolver solver(ops, K, dirichlet.dofs);
    return solver.solve(rhs_u, rhs_p, dirichlet.values);
}

double divergence_residual(const StokesOperators& ops, const Vector& u, const Vector& p)
{
    const Vector r = ops.B.transpose() * u - ops.J * p;
    const double c = r.sum() / ops.mean_row.sum();
    return (r - c * ops.mean_row).lpNorm<Eigen::Infinity>();
}

RitzProjector::RitzProjector(const StokesOperators& ops)
    : ops_(&ops)
    , solver_(ops, ops.A, ops.velocity->boundary_dofs())
{
}

SteadySolution RitzProjector::project(const std::function<Vec2(Point)>& u, const std::function<Mat2(Point)>& grad_u,
                                      const std::function<double(Point)>& p) const
{
    const auto& ops = *ops_;
    const Vector rhs = assemble_ritz_load(*ops.velocity, ops.nu, grad_u, p);
    const auto trace = apply_dirichlet(*ops.velocity, u);
    return solver_.solve(rhs, Vector::Zero(ops.pressure->num_dofs()), trace.values);
}

SteadySolution ritz_project(const StokesOperators& ops, const std::function<Vec2(Point)>& u,
                            const std::function<Mat2(Point)>& grad_u, const std::function<double(Point)>& p)
{
    return RitzProjector(ops).project(u, grad_u, p);
}

} // namespace stokes_bdf
