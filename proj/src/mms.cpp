#include "stokes_bdf/mms.hpp"

#include "stokes_bdf/errors.hpp"

#include <cmath>
#include <numbers>

namespace stokes_bdf {

Vec2 ManufacturedCase::forcing(Point x, double t, double nu) const
{
    const Vec2 a = du_dt(x, t);
    const Vec2 l = laplace_u(x, t);
    const Vec2 g = grad_p(x, t);
    return {a[0] - nu * l[0] + g[0], a[1] - nu * l[1] + g[1]};
}

std::function<Vec2(Point)> ManufacturedCase::velocity_at(double t) const
{
    return [f = u, t](Point x) { return f(x, t); };
}

std::function<Mat2(Point)> ManufacturedCase::velocity_gradient_at(double t) const
{
    return [f = grad_u, t](Point x) { return f(x, t); };
}

std::function<double(Point)> ManufacturedCase::pressure_at(double t) const
{
    return [f = p, t](Point x) { return f(x, t); };
}

std::function<Vec2(Point)> ManufacturedCase::forcing_at(double t, double nu) const
{
    return [self = *this, t, nu](Point x) { return self.forcing(x, t, nu); };
}

ManufacturedCase paper_case(bool steady_g1)
{
    using std::numbers::pi;
    const double shift_x = -0.7;
    const double shift_y = 0.2;
    const double mean_fix = (std::cos(1.0) - 1.0) * std::sin(1.0);

    std::function<double(double)> g;
    std::function<double(double)> dg;
    if (steady_g1) {
        g = [](double) { return 1.0; };
        dg = [](double) { return 0.0; };
    } else {
        g = [](double t) { return 1.0 + 5.0 * t + std::exp(-10.0 * t) + std::sin(t); };
        dg = [](double t) { return 5.0 - 10.0 * std::exp(-10.0 * t) + std::cos(t); };
    }

    auto shape = [=](Point x) -> Vec2 {
        const double a = pi * x.x + shift_x;
        const double b = pi * x.y + shift_y;
        return {std::sin(a) * std::sin(b), std::cos(a) * std::cos(b)};
    };

    ManufacturedCase c;
    c.name = steady_g1 ? "paper-steady-g1" : "paper";
    c.u = [=](Point x, double t) -> Vec2 {
        const Vec2 s = shape(x);
        const double gt = g(t);
        return {gt * s[0], gt * s[1]};
    };
    c.du_dt = [=](Point x, double t) -> Vec2 {
        const Vec2 s = shape(x);
        const double d = dg(t);
        return {d * s[0], d * s[1]};
    };
    c.laplace_u = [=](Point x, double t) -> Vec2 {
        const Vec2 s = shape(x);
        const double f = -2.0 * pi * pi * g(t);
        return {f * s[0], f * s[1]};
    };
    c.grad_u = [=](Point x, double t) -> Mat2 {
        const double a = pi * x.x + shift_x;
        const double b = pi * x.y + shift_y;
        const double f = pi * g(t);
        return {{{f * std::cos(a) * std::sin(b), f * std::sin(a) * std::cos(b)},
                 {-f * std::sin(a) * std::cos(b), -f * std::cos(a) * std::sin(b)}}};
    };
    c.p = [=](Point x, double t) { return g(t) * (std::sin(x.x) * std::cos(x.y) + mean_fix); };
    c.grad_p = [=](Point x, double t) -> Vec2 {
        const double gt = g(t);
        return {gt * std::cos(x.x) * std::cos(x.y), -gt * std::sin(x.x) * std::sin(x.y)};
    };
    return c;
}

ManufacturedCase space_exact_case(int m)
{
    if (m < 0 || m > 7) {
        throw ConfigurationError("space-exact case needs 0 <= m <= 7, got " + std::to_string(m));
    }
    auto tm = [m](double t) { return m == 0 ? 1.0 : std::pow(t, m); };
    auto dtm = [m](double t) { return m == 0 ? 0.0 : m * (m == 1 ? 1.0 : std::pow(t, m - 1)); };

    ManufacturedCase c;
    c.name = "space-exact:" + std::to_string(m);
    c.u = [=](Point x, double t) -> Vec2 { return {tm(t) * x.y, -tm(t) * x.x}; };
    c.du_dt = [=](Point x, double t) -> Vec2 { return {dtm(t) * x.y, -dtm(t) * x.x}; };
    c.laplace_u = [](Point, double) -> Vec2 { return {0.0, 0.0}; };
    c.grad_u = [=](Point, double t) -> Mat2 { return {{{0.0, tm(t)}, {-tm(t), 0.0}}}; };
    c.p = [=](Point x, double t) { return tm(t) * (x.x + x.y - 1.0); };
    c.grad_p = [=](Point, double t) -> Vec2 { return {tm(t), tm(t)}; };
    return c;
}

ManufacturedCase homogeneous_case()
{
    ManufacturedCase c;
    c.name = "homogeneous";
    c.u = [](Point, double) -> Vec2 { return {0.0, 0.0}; };
    c.du_dt = c.u;
    c.laplace_u = c.u;
    c.grad_u = [](Point, double) -> Mat2 { return {{{0.0, 0.0}, {0.0, 0.0}}}; };
    c.p = [](Point, double) { return 0.0; };
    c.grad_p = c.u;
    return c;
}

ManufacturedCase case_by_name(const std::string& name)
{
    if (name == "paper") {
        return paper_case(false);
    }
    if (name == "paper-steady-g1") {
        return paper_case(true);
    }
    const std::string prefix = "space-exact:";
    if (name.rfind(prefix, 0) == 0) {
        const std::string tail = name.substr(prefix.size());
        std::size_t used = 0;
        int m = -1;
        try {
            m = std::stoi(tail, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != tail.size()) {
            throw ConfigurationError("malformed case name '" + name + "'");
        }
        return space_exact_case(m);
    }
    throw ConfigurationError("unknown case '" + name + "' (expected paper, paper-steady-g1, space-exact:<m>)");
}

} // namespace stokes_bdf
