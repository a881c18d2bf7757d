#include "stokes_bdf/diagnostics.hpp"

#include "stokes_bdf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stokes_bdf {

double discrete_norm(std::span<const double> values, double tau, NormKind kind)
{
    if (values.empty()) {
        throw std::invalid_argument("discrete_norm of an empty sequence");
    }
    if (kind == NormKind::linf) {
        double m = 0.0;
        for (double v : values) {
            m = std::max(m, std::abs(v));
        }
        return m;
    }
    double s = 0.0;
    for (double v : values) {
        s += v * v;
    }
    return std::sqrt(tau * s);
}

FieldErrors field_errors(const StokesOperators& ops, const Vector& u, const Vector* p, const ManufacturedCase& exact,
                         double t)
{
    const auto& V = *ops.velocity;
    const auto& Q = *ops.pressure;
    const auto& mesh = V.mesh();
    const auto rule = triangle_rule(load_quadrature_degree(V.degree()));
    const Tabulation tv(V.element(), rule);
    const Tabulation tq(Q.element(), rule);
    const int lv = V.nodes_per_cell();
    const int lq = Q.nodes_per_cell();

    double eh = 0.0;
    double ev = 0.0;
    double pm = 0.0;
    std::vector<double> pe;
    std::vector<double> pw;
    if (p != nullptr) {
        pe.reserve(mesh.num_cells() * rule.size());
        pw.reserve(mesh.num_cells() * rule.size());
    }
    for (int c = 0; c < static_cast<int>(mesh.num_cells()); ++c) {
        const auto geo = cell_geometry(mesh, c);
        const auto vn = V.cell_nodes(c);
        const auto qn = Q.cell_nodes(c);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double w = 2.0 * geo.area * rule.weights[q];
            const Point x = geo.map(rule.barycentric[q]);
            Vec2 uh{0.0, 0.0};
            Mat2 guh{{{0.0, 0.0}, {0.0, 0.0}}};
            for (int i = 0; i < lv; ++i) {
                const int node = vn[static_cast<std::size_t>(i)];
                const double phi = tv.value(q, i);
                const Vec2 g = tv.gradient(q, i, geo);
                for (int comp = 0; comp < 2; ++comp) {
                    const auto cc = static_cast<std::size_t>(comp);
                    const double coef = u[V.dof(comp, node)];
                    uh[cc] += coef * phi;
                    guh[cc][0] += coef * g[0];
                    guh[cc][1] += coef * g[1];
                }
            }
            const Vec2 ue = exact.u(x, t);
            const Mat2 gue = exact.grad_u(x, t);
            eh += w * (std::pow(ue[0] - uh[0], 2) + std::pow(ue[1] - uh[1], 2));
            for (std::size_t a = 0; a < 2; ++a) {
                for (std::size_t b = 0; b < 2; ++b) {
                    ev += w * std::pow(gue[a][b] - guh[a][b], 2);
                }
            }
            if (p != nullptr) {
                double ph = 0.0;
                for (int i = 0; i < lq; ++i) {
                    ph += (*p)[qn[static_cast<std::size_t>(i)]] * tq.value(q, i);
                }
                const double e = exact.p(x, t) - ph;
                pe.push_back(e);
                pw.push_back(w);
                pm += w * e;
            }
        }
    }
    FieldErrors out;
    out.u_H = std::sqrt(eh);
    out.u_V = std::sqrt(ops.nu * ev);
    if (p != nullptr) {
        double area = 0.0;
        for (double w : pw) {
            area += w;
        }
        const double mean = pm / area;
        double s = 0.0;
        for (std::size_t i = 0; i < pe.size(); ++i) {
            s += pw[i] * std::pow(pe[i] - mean, 2);
        }
        out.p_Q = std::sqrt(s / ops.nu);
        out.has_pressure = true;
    }
    return out;
}

Vector bdf_derivative(const Trajectory& traj, const BdfScheme& scheme, int n)
{
    const int q = scheme.order;
    if (n < q || n >= static_cast<int>(traj.records.size())) {
        throw std::out_of_range("bdf_derivative: step outside q..N");
    }
    const auto delta = scheme.delta_values();
    Vector d = delta[0] * traj.records[static_cast<std::size_t>(n)].u;
    for (int i = 1; i <= q; ++i) {
        d += delta[static_cast<std::size_t>(i)] * traj.records[static_cast<std::size_t>(n - i)].u;
    }
    return d / traj.tau;
}

NormReport error_norms(const Trajectory& traj, const StokesOperators& ops, const ManufacturedCase& exact,
                       const BdfScheme& scheme)
{
    const int q = traj.q;
    const int last = static_cast<int>(traj.records.size()) - 1;
    if (last < q) {
        throw ConfigurationError("error_norms needs at least one computed step");
    }
    NormReport r;
    std::vector<double> eh;
    std::vector<double> ev;
    std::vector<double> ep;
    std::vector<double> jh;
    std::vector<double> acc;
    for (int n = 0; n <= last; ++n) {
        const auto& rec = traj.records[static_cast<std::size_t>(n)];
        const Vector* p = (n >= q && rec.p) ? &*rec.p : nullptr;
        auto fe = field_errors(ops, rec.u, p, exact, rec.t);
        eh.push_back(fe.u_H);
        if (n >= q) {
            ev.push_back(fe.u_V);
            ep.push_back(fe.p_Q);
            jh.push_back(std::sqrt(std::max(0.0, rec.p->dot(ops.J * *rec.p))));
            const Vector d = bdf_derivative(traj, scheme, n);
            acc.push_back(std::sqrt(std::max(0.0, d.dot(ops.M * d))));
        }
        r.per_step.push_back(fe);
    }
    r.err_linf_H = discrete_norm(eh, traj.tau, NormKind::linf);
    r.err_final_H = eh.back();
    r.err_l2_V = discrete_norm(ev, traj.tau, NormKind::l2);
    r.err_l2_Q = discrete_norm(ep, traj.tau, NormKind::l2);
    r.seminorm_jh = discrete_norm(jh, traj.tau, NormKind::l2);
    r.accel_l2_H = discrete_norm(acc, traj.tau, NormKind::l2);
    r.smallstep_p = std::sqrt(traj.tau) * ep.front();
    return r;
}

namespace {

TheoremRatio make_ratio(double lhs, double rhs, bool conditional)
{
    TheoremRatio r;
    r.lhs = lhs;
    r.rhs = rhs;
    r.conditional = conditional;
    if (rhs > 0.0) {
        r.ratio = lhs / rhs;
    } else {
        r.zero_rhs = true;
        r.ratio = 0.0;
    }
    return r;
}

double quad(const SparseMatrix& m, const Vector& v) { return std::max(0.0, v.dot(m * v)); }

} // namespace

StabilityReport stability_ratios(const Trajectory& traj, const StokesOperators& ops, const BdfScheme& scheme,
                                 std::optional<int> last)
{
    const int q = traj.q;
    const int N = last.value_or(static_cast<int>(traj.records.size()) - 1);
    if (N < q || N >= static_cast<int>(traj.records.size())) {
        throw std::out_of_range("stability_ratios: last step outside q..N");
    }
    if (static_cast<int>(traj.forcing_norms.size()) < N - q + 1) {
        throw ConfigurationError("stability_ratios: missing forcing norms");
    }
    const double tau = traj.tau;
    const double cp2 = kPoincare * kPoincare / ops.nu;

    double start_H = 0.0;
    double start_V = 0.0;
    double start_j = 0.0;
    bool missing_pressure = false;
    for (int i = 0; i < q; ++i) {
        const auto& rec = traj.records[static_cast<std::size_t>(i)];
        start_H += quad(ops.M, rec.u);
        start_V += quad(ops.A, rec.u);
        if (rec.p) {
            start_j += quad(ops.J, *rec.p);
        } else {
            missing_pressure = true;
        }
    }
    double sum_V = 0.0;
    double sum_j = 0.0;
    double sum_acc = 0.0;
    double sum_Q = 0.0;
    double sum_f = 0.0;
    for (int n = q; n <= N; ++n) {
        const auto& rec = traj.records[static_cast<std::size_t>(n)];
        sum_V += quad(ops.A, rec.u);
        sum_j += quad(ops.J, *rec.p);
        sum_Q += quad(ops.Mp, *rec.p) / ops.nu;
        const Vector d = bdf_derivative(traj, scheme, n);
        sum_acc += quad(ops.M, d);
        const double f = traj.forcing_norms[static_cast<std::size_t>(n - q)];
        sum_f += f * f;
    }
    const auto& fin = traj.records[static_cast<std::size_t>(N)];

    StabilityReport r;
    r.velocity = make_ratio(quad(ops.M, fin.u) + tau * sum_V + tau * sum_j, start_H + cp2 * tau * sum_f, false);
    r.acceleration = make_ratio(tau * sum_acc + quad(ops.A, fin.u) + quad(ops.J, *fin.p),
                                start_V + start_j + tau * sum_f, missing_pressure);
    r.pressure = make_ratio(tau * sum_Q, start_H + cp2 * start_V + cp2 * start_j + cp2 * tau * sum_f,
                            missing_pressure);
    return r;
}

std::vector<double> g_norm_sequence(const Trajectory& traj, const StokesOperators& ops, const GMatrix& g)
{
    const int q = traj.q;
    const auto inner = matrix_inner(ops.M);
    std::vector<double> out;
    std::vector<Vector> window(static_cast<std::size_t>(q));
    for (int n = q - 1; n < static_cast<int>(traj.records.size()); ++n) {
        for (int i = 0; i < q; ++i) {
            window[static_cast<std::size_t>(i)] = traj.records[static_cast<std::size_t>(n - i)].u;
        }
        out.push_back(g_norm(g, window, inner));
    }
    return out;
}

RateFit fit_rate(std::span<const double> x, std::span<const double> errors)
{
    if (x.size() != errors.size() || x.size() < 2) {
        throw std::invalid_argument("fit_rate needs at least two (x, error) pairs");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(errors[i] > 0.0) || !(x[i] > 0.0)) {
            throw std::invalid_argument("fit_rate needs positive x and error values");
        }
    }
    RateFit fit;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        fit.pairwise.push_back(std::log(errors[i] / errors[i + 1]) / std::log(x[i] / x[i + 1]));
    }
    const auto n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(errors[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return fit;
}

} // namespace stokes_bdf
