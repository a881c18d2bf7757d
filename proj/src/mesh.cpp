#include "stokes_bdf/mesh.hpp"

#include "stokes_bdf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

namespace stokes_bdf {

Mesh::Mesh(int n)
    : n_(n)
{
    if (n < 2) {
        throw std::invalid_argument("unit_square_mesh: n must be >= 2");
    }
    const int nv = n + 1;
    vertices_.reserve(static_cast<std::size_t>(nv * nv));
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            vertices_.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
            if (i == 0 || j == 0 || i == n || j == n) {
                boundary_vertices_.push_back(j * nv + i);
            }
        }
    }
    cells_.reserve(static_cast<std::size_t>(2 * n * n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int v00 = j * nv + i;
            const int v10 = v00 + 1;
            const int v01 = v00 + nv;
            const int v11 = v01 + 1;
            cells_.push_back({v00, v10, v11});
            cells_.push_back({v00, v11, v01});
        }
    }

    std::map<std::pair<int, int>, int> edge_index;
    cell_edges_.resize(cells_.size());
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        const auto& cell = cells_[c];
        for (int e = 0; e < 3; ++e) {
            int a = cell[static_cast<std::size_t>((e + 1) % 3)];
            int b = cell[static_cast<std::size_t>((e + 2) % 3)];
            if (a > b) {
                std::swap(a, b);
            }
            auto [it, inserted] = edge_index.try_emplace({a, b}, static_cast<int>(edges_.size()));
            if (inserted) {
                edges_.push_back(Edge{{a, b}, {static_cast<int>(c), -1}});
            } else {
                edges_[static_cast<std::size_t>(it->second)].cells[1] = static_cast<int>(c);
            }
            cell_edges_[c][static_cast<std::size_t>(e)] = it->second;
        }
    }

    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const auto& edge = edges_[e];
        if (edge.cells[1] < 0) {
            continue;
        }
        InteriorFacet f;
        f.edge = static_cast<int>(e);
        f.vertices = edge.vertices;
        f.left = edge.cells[0];
        f.right = edge.cells[1];
        const Point a = vertices_[static_cast<std::size_t>(edge.vertices[0])];
        const Point b = vertices_[static_cast<std::size_t>(edge.vertices[1])];
        const double tx = b.x - a.x;
        const double ty = b.y - a.y;
        f.length = std::hypot(tx, ty);
        Vec2 nrm{ty / f.length, -tx / f.length};
        // Orient from left to right: the left centroid must lie behind the facet.
        const auto& lc = cells_[static_cast<std::size_t>(f.left)];
        double cx = 0.0;
        double cy = 0.0;
        for (int v : lc) {
            cx += vertices_[static_cast<std::size_t>(v)].x / 3.0;
            cy += vertices_[static_cast<std::size_t>(v)].y / 3.0;
        }
        if ((cx - a.x) * nrm[0] + (cy - a.y) * nrm[1] > 0.0) {
            nrm = {-nrm[0], -nrm[1]};
        }
        f.normal = nrm;
        interior_facets_.push_back(f);
    }

    for (std::size_t c = 0; c < cells_.size(); ++c) {
        h_ = std::max(h_, cell_diameter(static_cast<int>(c)));
    }
}

double Mesh::cell_area(int cell) const
{
    const auto& t = cells_.at(static_cast<std::size_t>(cell));
    const Point a = vertices_[static_cast<std::size_t>(t[0])];
    const Point b = vertices_[static_cast<std::size_t>(t[1])];
    const Point c = vertices_[static_cast<std::size_t>(t[2])];
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

double Mesh::cell_diameter(int cell) const
{
    const auto& t = cells_.at(static_cast<std::size_t>(cell));
    double d = 0.0;
    for (int i = 0; i < 3; ++i) {
        const Point a = vertices_[static_cast<std::size_t>(t[static_cast<std::size_t>(i)])];
        const Point b = vertices_[static_cast<std::size_t>(t[static_cast<std::size_t>((i + 1) % 3)])];
        d = std::max(d, std::hypot(b.x - a.x, b.y - a.y));
    }
    return d;
}

void Mesh::write(std::ostream& os) const
{
    os << "vertices " << vertices_.size() << '\n';
    for (const auto& v : vertices_) {
        os << v.x << ' ' << v.y << '\n';
    }
    os << "cells " << cells_.size() << '\n';
    for (const auto& c : cells_) {
        os << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
    }
}

Mesh unit_square_mesh(int n)
{
    return Mesh(n);
}

} // namespace stokes_bdf
