#include "stokes_bdf/fem.hpp"

#include "stokes_bdf/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace stokes_bdf {

LagrangeElement::LagrangeElement(int degree)
    : k_(degree)
{
    if (degree < 1 || degree > kMaxDegree) {
        throw std::invalid_argument("unsupported Lagrange degree " + std::to_string(degree));
    }
    const int k = degree;
    for (int v = 0; v < 3; ++v) {
        std::array<int, 3> a{0, 0, 0};
        a[static_cast<std::size_t>(v)] = k;
        alpha_.push_back(a);
    }
    for (int e = 0; e < 3; ++e) {
        const auto from = static_cast<std::size_t>((e + 1) % 3);
        const auto to = static_cast<std::size_t>((e + 2) % 3);
        for (int t = 1; t < k; ++t) {
            std::array<int, 3> a{0, 0, 0};
            a[from] = k - t;
            a[to] = t;
            alpha_.push_back(a);
        }
    }
    for (int i = 1; i < k; ++i) {
        for (int j = 1; i + j < k; ++j) {
            alpha_.push_back({k - i - j, i, j});
        }
    }
}

std::array<double, 3> LagrangeElement::node(int i) const
{
    const auto& a = alpha_[static_cast<std::size_t>(i)];
    return {static_cast<double>(a[0]) / k_, static_cast<double>(a[1]) / k_, static_cast<double>(a[2]) / k_};
}

namespace {

// prod_{j<m} (k l - j)/(j+1) and its derivative in l
std::pair<double, double> lattice_factor(int k, int m, double l)
{
    double value = 1.0;
    double deriv = 0.0;
    for (int j = 0; j < m; ++j) {
        const double f = (k * l - j) / (j + 1.0);
        const double df = k / (j + 1.0);
        deriv = deriv * f + value * df;
        value *= f;
    }
    return {value, deriv};
}

} // namespace

void LagrangeElement::values(const std::array<double, 3>& lambda, std::span<double> out) const
{
    for (std::size_t i = 0; i < alpha_.size(); ++i) {
        double v = 1.0;
        for (std::size_t m = 0; m < 3; ++m) {
            v *= lattice_factor(k_, alpha_[i][m], lambda[m]).first;
        }
        out[i] = v;
    }
}

void LagrangeElement::lambda_derivatives(const std::array<double, 3>& lambda,
                                         std::span<std::array<double, 3>> out) const
{
    for (std::size_t i = 0; i < alpha_.size(); ++i) {
        std::array<std::pair<double, double>, 3> f{};
        for (std::size_t m = 0; m < 3; ++m) {
            f[m] = lattice_factor(k_, alpha_[i][m], lambda[m]);
        }
        out[i] = {f[0].second * f[1].first * f[2].first,
                  f[0].first * f[1].second * f[2].first,
                  f[0].first * f[1].first * f[2].second};
    }
}

Point CellGeometry::map(const std::array<double, 3>& lambda) const
{
    return {lambda[0] * vertices[0].x + lambda[1] * vertices[1].x + lambda[2] * vertices[2].x,
            lambda[0] * vertices[0].y + lambda[1] * vertices[1].y + lambda[2] * vertices[2].y};
}

std::array<double, 3> CellGeometry::barycentric(Point p) const
{
    const double dx = p.x - vertices[0].x;
    const double dy = p.y - vertices[0].y;
    const double l1 = grad_lambda[1][0] * dx + grad_lambda[1][1] * dy;
    const double l2 = grad_lambda[2][0] * dx + grad_lambda[2][1] * dy;
    return {1.0 - l1 - l2, l1, l2};
}

CellGeometry cell_geometry(const Mesh& mesh, int cell)
{
    CellGeometry g;
    const auto& c = mesh.cells()[static_cast<std::size_t>(cell)];
    for (std::size_t i = 0; i < 3; ++i) {
        g.vertices[i] = mesh.vertices()[static_cast<std::size_t>(c[i])];
    }
    const double j00 = g.vertices[1].x - g.vertices[0].x;
    const double j01 = g.vertices[2].x - g.vertices[0].x;
    const double j10 = g.vertices[1].y - g.vertices[0].y;
    const double j11 = g.vertices[2].y - g.vertices[0].y;
    const double det = j00 * j11 - j01 * j10;
    g.area = 0.5 * det;
    // rows of J^{-1}
    g.grad_lambda[1] = {j11 / det, -j01 / det};
    g.grad_lambda[2] = {-j10 / det, j00 / det};
    g.grad_lambda[0] = {-g.grad_lambda[1][0] - g.grad_lambda[2][0], -g.grad_lambda[1][1] - g.grad_lambda[2][1]};
    return g;
}

FeSpace::FeSpace(std::shared_ptr<const Mesh> mesh, int degree, int components)
    : mesh_(std::move(mesh))
    , element_(degree)
    , components_(components)
{
    if (components != 1 && components != 2) {
        throw std::invalid_argument("FeSpace: components must be 1 or 2");
    }
    const int k = degree;
    const auto& m = *mesh_;
    const int nv = static_cast<int>(m.vertices().size());
    const int ne = static_cast<int>(m.edges().size());
    const int nc = static_cast<int>(m.num_cells());
    const int per_edge = k - 1;
    const int per_cell = (k - 1) * (k - 2) / 2;
    const int total = nv + ne * per_edge + nc * per_cell;
    const int nloc = element_.size();

    coordinates_.resize(static_cast<std::size_t>(total));
    on_boundary_.assign(static_cast<std::size_t>(total), false);
    cell_nodes_.resize(static_cast<std::size_t>(nc * nloc));

    for (int c = 0; c < nc; ++c) {
        const auto& verts = m.cells()[static_cast<std::size_t>(c)];
        const auto& edges = m.cell_edges()[static_cast<std::size_t>(c)];
        const auto geo = cell_geometry(m, c);
        int* local = &cell_nodes_[static_cast<std::size_t>(c * nloc)];
        int slot = 0;
        for (int v = 0; v < 3; ++v) {
            local[slot++] = verts[static_cast<std::size_t>(v)];
        }
        for (int e = 0; e < 3; ++e) {
            const int edge = edges[static_cast<std::size_t>(e)];
            const int from = verts[static_cast<std::size_t>((e + 1) % 3)];
            const bool forward = m.edges()[static_cast<std::size_t>(edge)].vertices[0] == from;
            for (int t = 0; t < per_edge; ++t) {
                const int tt = forward ? t : per_edge - 1 - t;
                local[slot++] = nv + edge * per_edge + tt;
            }
        }
        for (int s = 0; s < per_cell; ++s) {
            local[slot++] = nv + ne * per_edge + c * per_cell + s;
        }
        for (int i = 0; i < nloc; ++i) {
            coordinates_[static_cast<std::size_t>(local[i])] = geo.map(element_.node(i));
        }
    }

    for (int v : m.boundary_vertices()) {
        on_boundary_[static_cast<std::size_t>(v)] = true;
    }
    for (int e = 0; e < ne; ++e) {
        if (m.edges()[static_cast<std::size_t>(e)].cells[1] < 0) {
            for (int t = 0; t < per_edge; ++t) {
                on_boundary_[static_cast<std::size_t>(nv + e * per_edge + t)] = true;
            }
        }
    }
    for (int i = 0; i < total; ++i) {
        if (on_boundary_[static_cast<std::size_t>(i)]) {
            boundary_nodes_.push_back(i);
        }
    }
}

std::span<const int> FeSpace::cell_nodes(int cell) const
{
    const auto nloc = static_cast<std::size_t>(nodes_per_cell());
    return {cell_nodes_.data() + static_cast<std::size_t>(cell) * nloc, nloc};
}

std::vector<int> FeSpace::boundary_dofs() const
{
    std::vector<int> out;
    out.reserve(boundary_nodes_.size() * static_cast<std::size_t>(components_));
    for (int c = 0; c < components_; ++c) {
        for (int n : boundary_nodes_) {
            out.push_back(dof(c, n));
        }
    }
    return out;
}

FeSpace make_space(std::shared_ptr<const Mesh> mesh, int degree, int components)
{
    return FeSpace(std::move(mesh), degree, components);
}

BasisValues eval_basis(const FeSpace& space, int cell, const std::array<double, 3>& lambda)
{
    const auto& el = space.element();
    const auto geo = cell_geometry(space.mesh(), cell);
    BasisValues out;
    const auto n = static_cast<std::size_t>(el.size());
    out.values.resize(n);
    out.gradients.resize(n);
    std::vector<std::array<double, 3>> dl(n);
    el.values(lambda, out.values);
    el.lambda_derivatives(lambda, dl);
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 g{0.0, 0.0};
        for (std::size_t m = 0; m < 3; ++m) {
            g[0] += dl[i][m] * geo.grad_lambda[m][0];
            g[1] += dl[i][m] * geo.grad_lambda[m][1];
        }
        out.gradients[i] = g;
    }
    return out;
}

Tabulation::Tabulation(const LagrangeElement& element, QuadratureRule quadrature)
    : nodes(element.size())
    , rule(std::move(quadrature))
{
    const auto n = static_cast<std::size_t>(nodes);
    values.resize(rule.size() * n);
    dlambda.resize(rule.size() * n);
    for (std::size_t q = 0; q < rule.size(); ++q) {
        element.values(rule.barycentric[q], std::span<double>(values.data() + q * n, n));
        element.lambda_derivatives(rule.barycentric[q], std::span<std::array<double, 3>>(dlambda.data() + q * n, n));
    }
}

Vec2 Tabulation::gradient(std::size_t q, int i, const CellGeometry& geo) const
{
    const auto& d = dlambda[q * static_cast<std::size_t>(nodes) + static_cast<std::size_t>(i)];
    return {d[0] * geo.grad_lambda[0][0] + d[1] * geo.grad_lambda[1][0] + d[2] * geo.grad_lambda[2][0],
            d[0] * geo.grad_lambda[0][1] + d[1] * geo.grad_lambda[1][1] + d[2] * geo.grad_lambda[2][1]};
}

Vector interpolate(const FeSpace& space, const std::function<double(Point)>& f)
{
    if (space.components() != 1) {
        throw DimensionError("scalar interpolation on a vector space");
    }
    Vector out(space.num_dofs());
    const auto& x = space.node_coordinates();
    for (int i = 0; i < space.num_nodes(); ++i) {
        out[i] = f(x[static_cast<std::size_t>(i)]);
    }
    return out;
}

Vector interpolate(const FeSpace& space, const std::function<Vec2(Point)>& f)
{
    if (space.components() != 2) {
        throw DimensionError("vector interpolation on a scalar space");
    }
    Vector out(space.num_dofs());
    const auto& x = space.node_coordinates();
    for (int i = 0; i < space.num_nodes(); ++i) {
        const auto v = f(x[static_cast<std::size_t>(i)]);
        out[space.dof(0, i)] = v[0];
        out[space.dof(1, i)] = v[1];
    }
    return out;
}

double l2_norm(const Mesh& mesh, const std::function<Vec2(Point)>& f, int degree)
{
    const auto rule = triangle_rule(degree);
    double sum = 0.0;
    for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
        const auto geo = cell_geometry(mesh, c);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Vec2 v = f(geo.map(rule.barycentric[q]));
            sum += 2.0 * geo.area * rule.weights[q] * (v[0] * v[0] + v[1] * v[1]);
        }
    }
    return std::sqrt(sum);
}

} // namespace stokes_bdf
