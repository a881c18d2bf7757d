#pragma once

#include "stokes_bdf/mesh.hpp"
#include "stokes_bdf/quadrature.hpp"
#include "stokes_bdf/types.hpp"

#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace stokes_bdf {

inline constexpr int kMaxDegree = 6;

/// Equispaced Lagrange element of degree k on the reference triangle.
///
/// Local node order: the three vertices, then k-1 nodes per edge (edge e joins
/// vertices (e+1)%3 and (e+2)%3, listed from the first towards the second),
/// then interior nodes.
class LagrangeElement {
public:
    explicit LagrangeElement(int degree);

    [[nodiscard]] int degree() const { return k_; }
    [[nodiscard]] int size() const { return static_cast<int>(alpha_.size()); }
    [[nodiscard]] const std::array<int, 3>& multi_index(int i) const { return alpha_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] std::array<double, 3> node(int i) const;

    /// Shape function values at barycentric point `lambda`.
    void values(const std::array<double, 3>& lambda, std::span<double> out) const;
    /// Derivatives with respect to lambda_0..lambda_2 (treated as independent).
    void lambda_derivatives(const std::array<double, 3>& lambda, std::span<std::array<double, 3>> out) const;

private:
    int k_;
    std::vector<std::array<int, 3>> alpha_;
};

/// Affine map data of one cell.
struct CellGeometry {
    std::array<Point, 3> vertices{};
    double area = 0.0;
    std::array<Vec2, 3> grad_lambda{}; ///< constant gradients of the barycentric coordinates

    [[nodiscard]] Point map(const std::array<double, 3>& lambda) const;
    [[nodiscard]] std::array<double, 3> barycentric(Point p) const;
};

CellGeometry cell_geometry(const Mesh& mesh, int cell);

/// Continuous P_k Lagrange space with 1 (scalar) or 2 (vector) components.
/// Vector dofs are blocked by component: dof(c, node) = c * num_nodes + node.
class FeSpace {
public:
    FeSpace(std::shared_ptr<const Mesh> mesh, int degree, int components);

    [[nodiscard]] const Mesh& mesh() const { return *mesh_; }
    [[nodiscard]] const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }
    [[nodiscard]] const LagrangeElement& element() const { return element_; }
    [[nodiscard]] int degree() const { return element_.degree(); }
    [[nodiscard]] int components() const { return components_; }
    [[nodiscard]] int num_nodes() const { return static_cast<int>(coordinates_.size()); }
    [[nodiscard]] int num_dofs() const { return components_ * num_nodes(); }
    [[nodiscard]] int nodes_per_cell() const { return element_.size(); }
    [[nodiscard]] std::span<const int> cell_nodes(int cell) const;
    [[nodiscard]] int dof(int component, int node) const { return component * num_nodes() + node; }
    [[nodiscard]] const std::vector<Point>& node_coordinates() const { return coordinates_; }
    [[nodiscard]] const std::vector<int>& boundary_nodes() const { return boundary_nodes_; }
    [[nodiscard]] std::vector<int> boundary_dofs() const;
    [[nodiscard]] const std::vector<bool>& is_boundary_node() const { return on_boundary_; }

private:
    std::shared_ptr<const Mesh> mesh_;
    LagrangeElement element_;
    int components_;
    std::vector<int> cell_nodes_;
    std::vector<Point> coordinates_;
    std::vector<int> boundary_nodes_;
    std::vector<bool> on_boundary_;
};

FeSpace make_space(std::shared_ptr<const Mesh> mesh, int degree, int components);

struct BasisValues {
    std::vector<double> values;
    std::vector<Vec2> gradients; ///< physical gradients
};

/// Shape functions of `cell` at a reference point given in barycentric coordinates.
BasisValues eval_basis(const FeSpace& space, int cell, const std::array<double, 3>& lambda);

/// Shape values and lambda-derivatives tabulated once on a quadrature rule.
struct Tabulation {
    int nodes = 0;
    QuadratureRule rule;
    std::vector<double> values;                      ///< [q * nodes + i]
    std::vector<std::array<double, 3>> dlambda;      ///< [q * nodes + i]

    Tabulation(const LagrangeElement& element, QuadratureRule quadrature);

    [[nodiscard]] double value(std::size_t q, int i) const { return values[q * static_cast<std::size_t>(nodes) + static_cast<std::size_t>(i)]; }
    [[nodiscard]] Vec2 gradient(std::size_t q, int i, const CellGeometry& geo) const;
};

Vector interpolate(const FeSpace& space, const std::function<double(Point)>& f);
Vector interpolate(const FeSpace& space, const std::function<Vec2(Point)>& f);

/// L2 norm of a vector field on the mesh by a degree-`degree` cell rule.
double l2_norm(const Mesh& mesh, const std::function<Vec2(Point)>& f, int degree);

} // namespace stokes_bdf
