#include "stokes_bdf/mesh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

using namespace stokes_bdf;

TEST(Mesh, CountsForTwoSubdivisions)
{
    const auto m = unit_square_mesh(2);
    EXPECT_EQ(m.vertices().size(), 9u);
    EXPECT_EQ(m.num_cells(), 8u);
    EXPECT_NEAR(m.h(), std::sqrt(2.0) / 2.0, 1e-15);
}

TEST(Mesh, InteriorFacetCensus)
{
    for (int n : {2, 3, 4, 7}) {
        const auto m = unit_square_mesh(n);
        // brute-force: count cell-edge incidences
        std::map<std::pair<int, int>, int> incidence;
        for (const auto& c : m.cells()) {
            for (int e = 0; e < 3; ++e) {
                int a = c[static_cast<std::size_t>(e)];
                int b = c[static_cast<std::size_t>((e + 1) % 3)];
                incidence[{std::min(a, b), std::max(a, b)}]++;
            }
        }
        int interior = 0, boundary = 0;
        for (const auto& [edge, count] : incidence) {
            ASSERT_TRUE(count == 1 || count == 2);
            (count == 2 ? interior : boundary)++;
        }
        EXPECT_EQ(static_cast<int>(m.interior_facets().size()), interior);
        EXPECT_EQ(interior, 3 * n * n - 2 * n);
        EXPECT_EQ(boundary, 4 * n);
        EXPECT_EQ(m.edges().size(), incidence.size());
    }
    EXPECT_EQ(unit_square_mesh(4).interior_facets().size(), 40u);
}

TEST(Mesh, AreasPositiveAndSumToOne)
{
    const auto m = unit_square_mesh(5);
    double total = 0.0;
    for (int c = 0; c < static_cast<int>(m.num_cells()); ++c) {
        EXPECT_GT(m.cell_area(c), 0.0);
        total += m.cell_area(c);
    }
    EXPECT_NEAR(total, 1.0, 1e-14);
}

TEST(Mesh, EulerRelation)
{
    for (int n : {2, 5, 8}) {
        const auto m = unit_square_mesh(n);
        const long v = static_cast<long>(m.vertices().size());
        const long e = static_cast<long>(m.edges().size());
        const long f = static_cast<long>(m.num_cells());
        EXPECT_EQ(v - e + f, 1);
    }
}

TEST(Mesh, FacetNormalsUnitAndLeftToRight)
{
    const auto m = unit_square_mesh(4);
    auto centroid = [&](int c) {
        Point p;
        for (int v : m.cells()[static_cast<std::size_t>(c)]) {
            p.x += m.vertices()[static_cast<std::size_t>(v)].x / 3.0;
            p.y += m.vertices()[static_cast<std::size_t>(v)].y / 3.0;
        }
        return p;
    };
    for (const auto& f : m.interior_facets()) {
        EXPECT_NEAR(std::hypot(f.normal[0], f.normal[1]), 1.0, 1e-15);
        const Point l = centroid(f.left);
        const Point r = centroid(f.right);
        EXPECT_GT((r.x - l.x) * f.normal[0] + (r.y - l.y) * f.normal[1], 0.0);
        const auto& a = m.vertices()[static_cast<std::size_t>(f.vertices[0])];
        const auto& b = m.vertices()[static_cast<std::size_t>(f.vertices[1])];
        EXPECT_NEAR(f.length, std::hypot(b.x - a.x, b.y - a.y), 1e-15);
        EXPECT_NEAR((b.x - a.x) * f.normal[0] + (b.y - a.y) * f.normal[1], 0.0, 1e-15);
    }
}

TEST(Mesh, CellsCounterclockwise)
{
    const auto m = unit_square_mesh(3);
    for (int c = 0; c < static_cast<int>(m.num_cells()); ++c) {
        EXPECT_GT(m.cell_area(c), 0.0);
    }
}

TEST(Mesh, RefinementHalvesH)
{
    for (int n : {2, 4, 8, 16}) {
        EXPECT_DOUBLE_EQ(unit_square_mesh(2 * n).h(), unit_square_mesh(n).h() / 2.0);
    }
}

TEST(Mesh, BoundaryVertices)
{
    const auto m = unit_square_mesh(4);
    EXPECT_EQ(m.boundary_vertices().size(), 16u);
    for (int v : m.boundary_vertices()) {
        const auto& p = m.vertices()[static_cast<std::size_t>(v)];
        EXPECT_TRUE(p.x == 0.0 || p.x == 1.0 || p.y == 0.0 || p.y == 1.0);
    }
    for (const auto& e : m.edges()) {
        if (e.cells[1] < 0) {
            const std::set<int> b(m.boundary_vertices().begin(), m.boundary_vertices().end());
            EXPECT_TRUE(b.contains(e.vertices[0]) && b.contains(e.vertices[1]));
        }
    }
}

TEST(Mesh, RejectsTooCoarse)
{
    EXPECT_THROW(unit_square_mesh(1), std::invalid_argument);
}

TEST(Mesh, TextDump)
{
    std::ostringstream os;
    unit_square_mesh(2).write(os);
    const std::string s = os.str();
    EXPECT_EQ(s.rfind("vertices 9\n", 0), 0u);
    EXPECT_NE(s.find("cells 8\n"), std::string::npos);
}
