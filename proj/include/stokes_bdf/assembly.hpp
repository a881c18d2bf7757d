#pragma once

#include "stokes_bdf/fem.hpp"
#include "stokes_bdf/types.hpp"

#include <memory>
#include <string>
#include <vector>

namespace stokes_bdf {

enum class Stabilization { cip, bp, none };

Stabilization parse_stabilization(const std::string& name);
std::string to_string(Stabilization s);
double default_gamma(Stabilization s);

/// Assembled discrete forms.
///
/// M: velocity mass. A: nu (grad u, grad v). B: Nv x Np with (B p) . v = b(p, v)
/// = -(p, div v). J: pressure stabilization. Mp: pressure mass.
/// mean_row[j] = integral of the j-th pressure basis function.
struct StokesOperators {
    std::shared_ptr<const FeSpace> velocity;
    std::shared_ptr<const FeSpace> pressure;
    double nu = 1.0;
    Stabilization stab = Stabilization::cip;
    double gamma = 0.0;
    SparseMatrix M;
    SparseMatrix A;
    SparseMatrix B;
    SparseMatrix J;
    SparseMatrix Mp;
    Vector mean_row;
};

/// Throws ConfigurationError for stab=none with a pair that is not Taylor-Hood.
StokesOperators assemble_operators(const FeSpace& velocity, const FeSpace& pressure, double nu,
                                   Stabilization stab, double gamma);

/// Quadrature degree for loads and error norms of a degree-k space.
int load_quadrature_degree(int k);

/// (f, phi_i) for a vector space.
Vector assemble_load(const FeSpace& velocity, const std::function<Vec2(Point)>& f);
/// (f, psi_i) for a scalar space.
Vector assemble_load(const FeSpace& scalar, const std::function<double(Point)>& f);

/// a(u, v_i) + b(p, v_i) for exact fields: nu (grad u, grad v_i) - (p, div v_i).
Vector assemble_ritz_load(const FeSpace& velocity, double nu, const std::function<Mat2(Point)>& grad_u,
                          const std::function<double(Point)>& p);

/// Boundary velocity dofs and their nodal values.
struct DirichletData {
    std::vector<int> dofs;
    Vector values; ///< same length as dofs
};

DirichletData apply_dirichlet(const FeSpace& velocity, const std::function<Vec2(Point)>& g);

/// Net outward flux of the nodal trace, i.e. integral of div of the
/// boundary lifting. Zero iff the boundary data are discretely compatible.
double boundary_flux(const StokesOperators& ops, const DirichletData& data);

} // namespace stokes_bdf
