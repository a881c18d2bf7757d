#pragma once

#include "stokes_bdf/types.hpp"

#include <array>
#include <iosfwd>
#include <vector>

namespace stokes_bdf {

struct Edge {
    std::array<int, 2> vertices{};   ///< lower index first
    std::array<int, 2> cells{-1, -1}; ///< cells[1] == -1 on the boundary
};

/// Interior facet shared by two cells; the normal points from `left` into `right`.
struct InteriorFacet {
    int edge = -1;
    std::array<int, 2> vertices{};
    int left = -1;
    int right = -1;
    Vec2 normal{};
    double length = 0.0;
};

/// Structured triangulation of the unit square: each of the n x n squares is
/// split along its (i, j)-(i+1, j+1) diagonal.
class Mesh {
public:
    explicit Mesh(int n);

    [[nodiscard]] int subdivisions() const { return n_; }
    [[nodiscard]] const std::vector<Point>& vertices() const { return vertices_; }
    [[nodiscard]] const std::vector<std::array<int, 3>>& cells() const { return cells_; }
    [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
    /// Local edge e of a cell joins local vertices (e+1)%3 and (e+2)%3.
    [[nodiscard]] const std::vector<std::array<int, 3>>& cell_edges() const { return cell_edges_; }
    [[nodiscard]] const std::vector<InteriorFacet>& interior_facets() const { return interior_facets_; }
    [[nodiscard]] const std::vector<int>& boundary_vertices() const { return boundary_vertices_; }

    [[nodiscard]] std::size_t num_cells() const { return cells_.size(); }
    [[nodiscard]] double cell_area(int cell) const;
    [[nodiscard]] double cell_diameter(int cell) const;
    /// max cell diameter
    [[nodiscard]] double h() const { return h_; }

    void write(std::ostream& os) const;

private:
    int n_;
    double h_ = 0.0;
    std::vector<Point> vertices_;
    std::vector<std::array<int, 3>> cells_;
    std::vector<Edge> edges_;
    std::vector<std::array<int, 3>> cell_edges_;
    std::vector<InteriorFacet> interior_facets_;
    std::vector<int> boundary_vertices_;
};

Mesh unit_square_mesh(int n);

} // namespace stokes_bdf
