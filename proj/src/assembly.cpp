#include "stokes_bdf/assembly.hpp"

#include "stokes_bdf/errors.hpp"

#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>

namespace stokes_bdf {

using Triplet = Eigen::Triplet<double>;

Stabilization parse_stabilization(const std::string& name)
{
    if (name == "cip") {
        return Stabilization::cip;
    }
    if (name == "bp") {
        return Stabilization::bp;
    }
    if (name == "none") {
        return Stabilization::none;
    }
    throw ConfigurationError("unknown stabilization '" + name + "' (expected cip, bp or none)");
}

std::string to_string(Stabilization s)
{
    switch (s) {
    case Stabilization::cip:
        return "cip";
    case Stabilization::bp:
        return "bp";
    case Stabilization::none:
        return "none";
    }
    return "unknown";
}

double default_gamma(Stabilization s)
{
    switch (s) {
    case Stabilization::cip:
        return 0.05;
    case Stabilization::bp:
        return 0.01;
    case Stabilization::none:
        return 0.0;
    }
    return 0.0;
}

int load_quadrature_degree(int k) { return 2 * k + 4; }

namespace {

SparseMatrix finalize(int rows, int cols, const std::vector<Triplet>& triplets)
{
    SparseMatrix m(rows, cols);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.prune(0.0);
    m.makeCompressed();
    return m;
}

double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

Vec2 physical_gradient(const std::array<double, 3>& dl, const CellGeometry& geo)
{
    return {dl[0] * geo.grad_lambda[0][0] + dl[1] * geo.grad_lambda[1][0] + dl[2] * geo.grad_lambda[2][0],
            dl[0] * geo.grad_lambda[0][1] + dl[1] * geo.grad_lambda[1][1] + dl[2] * geo.grad_lambda[2][1]};
}

void assemble_cip(const FeSpace& q, double scale, std::vector<Triplet>& out)
{
    const auto& mesh = q.mesh();
    const auto& el = q.element();
    const int nloc = el.size();
    const auto rule = gauss_legendre(std::max(1, q.degree()));
    std::vector<std::array<double, 3>> dl(static_cast<std::size_t>(nloc));
    std::vector<double> jump(static_cast<std::size_t>(2 * nloc));
    std::vector<int> dofs(static_cast<std::size_t>(2 * nloc));
    Eigen::MatrixXd local(2 * nloc, 2 * nloc);

    for (const auto& facet : mesh.interior_facets()) {
        const auto geo_l = cell_geometry(mesh, facet.left);
        const auto geo_r = cell_geometry(mesh, facet.right);
        const auto nodes_l = q.cell_nodes(facet.left);
        const auto nodes_r = q.cell_nodes(facet.right);
        for (int i = 0; i < nloc; ++i) {
            dofs[static_cast<std::size_t>(i)] = nodes_l[static_cast<std::size_t>(i)];
            dofs[static_cast<std::size_t>(nloc + i)] = nodes_r[static_cast<std::size_t>(i)];
        }
        const Point a = mesh.vertices()[static_cast<std::size_t>(facet.vertices[0])];
        const Point b = mesh.vertices()[static_cast<std::size_t>(facet.vertices[1])];
        const double h = facet.length;
        const double weight = scale * h * h * h * h;
        local.setZero();
        for (std::size_t g = 0; g < rule.points.size(); ++g) {
            const double s = rule.points[g];
            const Point x{a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)};
            el.lambda_derivatives(geo_l.barycentric(x), dl);
            for (int i = 0; i < nloc; ++i) {
                jump[static_cast<std::size_t>(i)] = dot(physical_gradient(dl[static_cast<std::size_t>(i)], geo_l), facet.normal);
            }
            el.lambda_derivatives(geo_r.barycentric(x), dl);
            for (int i = 0; i < nloc; ++i) {
                jump[static_cast<std::size_t>(nloc + i)] = -dot(physical_gradient(dl[static_cast<std::size_t>(i)], geo_r), facet.normal);
            }
            const double w = weight * rule.weights[g];
            for (int i = 0; i < 2 * nloc; ++i) {
                for (int j = 0; j < 2 * nloc; ++j) {
                    local(i, j) += w * jump[static_cast<std::size_t>(i)] * jump[static_cast<std::size_t>(j)];
                }
            }
        }
        for (int i = 0; i < 2 * nloc; ++i) {
            for (int j = 0; j < 2 * nloc; ++j) {
                out.emplace_back(dofs[static_cast<std::size_t>(i)], dofs[static_cast<std::size_t>(j)], local(i, j));
            }
        }
    }
}

} // namespace

StokesOperators assemble_operators(const FeSpace& velocity, const FeSpace& pressure, double nu,
                                   Stabilization stab, double gamma)
{
    if (velocity.components() != 2 || pressure.components() != 1) {
        throw ConfigurationError("assemble_operators expects a vector velocity and a scalar pressure space");
    }
    if (velocity.mesh_ptr() != pressure.mesh_ptr()) {
        throw ConfigurationError("velocity and pressure spaces live on different meshes");
    }
    if (!(nu > 0.0)) {
        throw ConfigurationError("viscosity must be positive");
    }
    if (!(gamma >= 0.0)) {
        throw ConfigurationError("stabilization weight must be nonnegative");
    }
    if (stab == Stabilization::none && velocity.degree() != pressure.degree() + 1) {
        throw ConfigurationError("stab=none requires a Taylor-Hood pair (velocity degree = pressure degree + 1)");
    }

    StokesOperators ops;
    ops.velocity = std::make_shared<const FeSpace>(velocity);
    ops.pressure = std::make_shared<const FeSpace>(pressure);
    ops.nu = nu;
    ops.stab = stab;
    ops.gamma = stab == Stabilization::none ? 0.0 : gamma;

    const auto& mesh = velocity.mesh();
    const int nu_nodes = velocity.num_nodes();
    const int nv = velocity.num_dofs();
    const int np = pressure.num_dofs();
    const Tabulation tv(velocity.element(), triangle_rule(2 * std::max(velocity.degree(), pressure.degree())));
    const Tabulation tp(pressure.element(), tv.rule);
    const int lv = velocity.nodes_per_cell();
    const int lp = pressure.nodes_per_cell();

    std::vector<Triplet> tm, ta, tb, tj, tmp;
    ops.mean_row = Vector::Zero(np);
    std::vector<Vec2> gv(static_cast<std::size_t>(lv));
    std::vector<Vec2> gp(static_cast<std::size_t>(lp));
    Eigen::MatrixXd mloc(lv, lv), aloc(lv, lv), bx(lv, lp), by(lv, lp), mploc(lp, lp), jloc(lp, lp);

    for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
        const auto geo = cell_geometry(mesh, c);
        const double area = geo.area;
        const double bp_scale = stab == Stabilization::bp ? gamma * std::pow(mesh.cell_diameter(c), 2) / nu : 0.0;
        mloc.setZero();
        aloc.setZero();
        bx.setZero();
        by.setZero();
        mploc.setZero();
        jloc.setZero();
        for (std::size_t q = 0; q < tv.rule.size(); ++q) {
            const double w = 2.0 * area * tv.rule.weights[q];
            for (int i = 0; i < lv; ++i) {
                gv[static_cast<std::size_t>(i)] = tv.gradient(q, i, geo);
            }
            for (int i = 0; i < lp; ++i) {
                gp[static_cast<std::size_t>(i)] = tp.gradient(q, i, geo);
            }
            for (int i = 0; i < lv; ++i) {
                const double vi = tv.value(q, i);
                for (int j = 0; j < lv; ++j) {
                    mloc(i, j) += w * vi * tv.value(q, j);
                    aloc(i, j) += w * nu * dot(gv[static_cast<std::size_t>(i)], gv[static_cast<std::size_t>(j)]);
                }
                for (int j = 0; j < lp; ++j) {
                    const double pj = tp.value(q, j);
                    bx(i, j) -= w * pj * gv[static_cast<std::size_t>(i)][0];
                    by(i, j) -= w * pj * gv[static_cast<std::size_t>(i)][1];
                }
            }
            for (int i = 0; i < lp; ++i) {
                const double pi = tp.value(q, i);
                ops.mean_row[pressure.cell_nodes(c)[static_cast<std::size_t>(i)]] += w * pi;
                for (int j = 0; j < lp; ++j) {
                    mploc(i, j) += w * pi * tp.value(q, j);
                    jloc(i, j) += w * bp_scale * dot(gp[static_cast<std::size_t>(i)], gp[static_cast<std::size_t>(j)]);
                }
            }
        }
        const auto vn = velocity.cell_nodes(c);
        const auto pn = pressure.cell_nodes(c);
        for (int i = 0; i < lv; ++i) {
            const int ni = vn[static_cast<std::size_t>(i)];
            for (int j = 0; j < lv; ++j) {
                const int nj = vn[static_cast<std::size_t>(j)];
                for (int comp = 0; comp < 2; ++comp) {
                    tm.emplace_back(comp * nu_nodes + ni, comp * nu_nodes + nj, mloc(i, j));
                    ta.emplace_back(comp * nu_nodes + ni, comp * nu_nodes + nj, aloc(i, j));
                }
            }
            for (int j = 0; j < lp; ++j) {
                const int pj = pn[static_cast<std::size_t>(j)];
                tb.emplace_back(ni, pj, bx(i, j));
                tb.emplace_back(nu_nodes + ni, pj, by(i, j));
            }
        }
        for (int i = 0; i < lp; ++i) {
            for (int j = 0; j < lp; ++j) {
                tmp.emplace_back(pn[static_cast<std::size_t>(i)], pn[static_cast<std::size_t>(j)], mploc(i, j));
                if (stab == Stabilization::bp) {
                    tj.emplace_back(pn[static_cast<std::size_t>(i)], pn[static_cast<std::size_t>(j)], jloc(i, j));
                }
            }
        }
    }
    if (stab == Stabilization::cip) {
        assemble_cip(pressure, gamma / nu, tj);
    }

    ops.M = finalize(nv, nv, tm);
    ops.A = finalize(nv, nv, ta);
    ops.B = finalize(nv, np, tb);
    ops.J = finalize(np, np, tj);
    ops.Mp = finalize(np, np, tmp);
    return ops;
}

Vector assemble_load(const FeSpace& velocity, const std::function<Vec2(Point)>& f)
{
    if (velocity.components() != 2) {
        throw DimensionError("vector load on a scalar space");
    }
    const auto& mesh = velocity.mesh();
    const Tabulation tab(velocity.element(), triangle_rule(load_quadrature_degree(velocity.degree())));
    const int nloc = velocity.nodes_per_cell();
    Vector out = Vector::Zero(velocity.num_dofs());
    for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
        const auto geo = cell_geometry(mesh, c);
        const auto nodes = velocity.cell_nodes(c);
        for (std::size_t q = 0; q < tab.rule.size(); ++q) {
            const double w = 2.0 * geo.area * tab.rule.weights[q];
            const Vec2 fv = f(geo.map(tab.rule.barycentric[q]));
            for (int i = 0; i < nloc; ++i) {
                const double phi = w * tab.value(q, i);
                const int node = nodes[static_cast<std::size_t>(i)];
                out[velocity.dof(0, node)] += phi * fv[0];
                out[velocity.dof(1, node)] += phi * fv[1];
            }
        }
    }
    return out;
}

Vector assemble_load(const FeSpace& scalar, const std::function<double(Point)>& f)
{
    if (scalar.components() != 1) {
        throw DimensionError("scalar load on a vector space");
    }
    const auto& mesh = scalar.mesh();
    const Tabulation tab(scalar.element(), triangle_rule(load_quadrature_degree(scalar.degree())));
    const int nloc = scalar.nodes_per_cell();
    Vector out = Vector::Zero(scalar.num_dofs());
    for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
        const auto geo = cell_geometry(mesh, c);
        const auto nodes = scalar.cell_nodes(c);
        for (std::size_t q = 0; q < tab.rule.size(); ++q) {
            const double w = 2.0 * geo.area * tab.rule.weights[q];
            const double fv = f(geo.map(tab.rule.barycentric[q]));
            for (int i = 0; i < nloc; ++i) {
                out[nodes[static_cast<std::size_t>(i)]] += w * tab.value(q, i) * fv;
            }
        }
    }
    return out;
}

Vector assemble_ritz_load(const FeSpace& velocity, double nu, const std::function<Mat2(Point)>& grad_u,
                          const std::function<double(Point)>& p)
{
    const auto& mesh = velocity.mesh();
    const Tabulation tab(velocity.element(), triangle_rule(load_quadrature_degree(velocity.degree())));
    const int nloc = velocity.nodes_per_cell();
    Vector out = Vector::Zero(velocity.num_dofs());
    for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
        const auto geo = cell_geometry(mesh, c);
        const auto nodes = velocity.cell_nodes(c);
        for (std::size_t q = 0; q < tab.rule.size(); ++q) {
            const double w = 2.0 * geo.area * tab.rule.weights[q];
            const Point x = geo.map(tab.rule.barycentric[q]);
            const Mat2 du = grad_u(x);
            const double pv = p(x);
            for (int i = 0; i < nloc; ++i) {
                const Vec2 g = tab.gradient(q, i, geo);
                const int node = nodes[static_cast<std::size_t>(i)];
                // component c of v_i carries grad phi_i in row c of grad v
                for (int comp = 0; comp < 2; ++comp) {
                    const auto cc = static_cast<std::size_t>(comp);
                    out[velocity.dof(comp, node)] += w * (nu * (du[cc][0] * g[0] + du[cc][1] * g[1]) - pv * g[cc]);
                }
            }
        }
    }
    return out;
}

DirichletData apply_dirichlet(const FeSpace& velocity, const std::function<Vec2(Point)>& g)
{
    if (velocity.components() != 2) {
        throw DimensionError("Dirichlet data expects a vector velocity space");
    }
    DirichletData data;
    const auto& nodes = velocity.boundary_nodes();
    const auto& x = velocity.node_coordinates();
    const std::size_t nb = nodes.size();
    data.dofs.resize(2 * nb);
    data.values.resize(static_cast<Eigen::Index>(2 * nb));
    for (std::size_t i = 0; i < nb; ++i) {
        const Vec2 v = g(x[static_cast<std::size_t>(nodes[i])]);
        data.dofs[i] = velocity.dof(0, nodes[i]);
        data.dofs[nb + i] = velocity.dof(1, nodes[i]);
        data.values[static_cast<Eigen::Index>(i)] = v[0];
        data.values[static_cast<Eigen::Index>(nb + i)] = v[1];
    }
    return data;
}

double boundary_flux(const StokesOperators& ops, const DirichletData& data)
{
    // integral of div g_h = -b(1, g_h) = -(B 1) . g_h
    const Vector b1 = ops.B * Vector::Ones(ops.B.cols());
    double flux = 0.0;
    for (std::size_t i = 0; i < data.dofs.size(); ++i) {
        flux -= b1[data.dofs[i]] * data.values[static_cast<Eigen::Index>(i)];
    }
    return flux;
}

} // namespace stokes_bdf
