#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <functional>

namespace stokes_bdf {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>; // [component][derivative]

/// Space-time scalar and vector fields as used by the manufactured cases.
using ScalarField = std::function<double(Point, double)>;
using VectorField = std::function<Vec2(Point, double)>;
using GradientField = std::function<Mat2(Point, double)>;

} // namespace stokes_bdf
