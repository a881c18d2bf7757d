#include "stokes_bdf/bdf.hpp"

#include "stokes_bdf/errors.hpp"

#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

namespace stokes_bdf {

namespace {

std::int64_t binomial(int n, int k)
{
    std::int64_t c = 1;
    for (int i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
    }
    return c;
}

// Coefficients mu_0..mu_q of the multiplier polynomial.
std::vector<double> multiplier_coefficients(const BdfScheme& scheme)
{
    std::vector<double> mu(static_cast<std::size_t>(scheme.order) + 1, 0.0);
    mu[0] = 1.0;
    for (std::size_t i = 0; i < scheme.eta.size() && i + 1 < mu.size(); ++i) {
        mu[i + 1] = -scheme.eta[i];
    }
    return mu;
}

std::complex<double> eval_poly(const std::vector<double>& c, std::complex<double> z)
{
    std::complex<double> acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * z + *it;
    }
    return acc;
}

} // namespace

std::vector<double> BdfScheme::delta_values() const
{
    std::vector<double> out;
    out.reserve(delta.size());
    for (const auto& d : delta) {
        out.push_back(boost::rational_cast<double>(d));
    }
    return out;
}

BdfScheme make_scheme(int order, MultiplierSet set)
{
    if (order < 1 || order > 6) {
        throw InvalidOrderError("BDF order must lie in 1..6, got " + std::to_string(order));
    }
    BdfScheme scheme;
    scheme.order = order;
    scheme.delta.assign(static_cast<std::size_t>(order) + 1, Rational(0));
    // delta(z) = sum_{l=1..q} (1/l) (1 - z)^l
    for (int l = 1; l <= order; ++l) {
        for (int i = 0; i <= l; ++i) {
            const std::int64_t sign = (i % 2 == 0) ? 1 : -1;
            scheme.delta[static_cast<std::size_t>(i)] += Rational(sign * binomial(l, i), l);
        }
    }

    static constexpr std::array<double, 6> classical{0.0, 0.0, 0.0769, 0.2878, 0.8097, 0.0};
    static constexpr std::array<double, 6> certified{0.0, 0.0, 0.0837, 0.2879, 0.8160, 0.0};
    if (order == 6) {
        scheme.eta = {13.0 / 9.0, -25.0 / 36.0, 1.0 / 9.0, 0.0, 0.0, 0.0};
    } else {
        const auto& table = set == MultiplierSet::classical ? classical : certified;
        scheme.eta = {table[static_cast<std::size_t>(order - 1)]};
    }
    return scheme;
}

BdfScheme with_multiplier(BdfScheme scheme, std::vector<double> eta)
{
    if (eta.empty() || eta.size() > static_cast<std::size_t>(scheme.order)) {
        throw DimensionError("multiplier vector length must lie in 1..q");
    }
    scheme.eta = std::move(eta);
    return scheme;
}

double positivity_function(const BdfScheme& scheme, double theta)
{
    const std::complex<double> z = std::polar(1.0, theta);
    const auto d = eval_poly(scheme.delta_values(), z);
    const auto m = eval_poly(multiplier_coefficients(scheme), z);
    return (d * std::conj(m)).real();
}

PositivityReport multiplier_positivity(const BdfScheme& scheme, int samples)
{
    if (samples < 1) {
        throw std::invalid_argument("multiplier_positivity: samples must be positive");
    }
    PositivityReport report{std::numeric_limits<double>::infinity(), 0.0};
    if (scheme.scalar_multiplier()) {
        const auto delta = scheme.delta_values();
        const auto mu = multiplier_coefficients(scheme);
        for (int s = 0; s < samples; ++s) {
            const double theta = 2.0 * std::numbers::pi * s / samples;
            const std::complex<double> z = std::polar(1.0, theta);
            const double e = (eval_poly(delta, z) * std::conj(eval_poly(mu, z))).real();
            if (e < report.min_value) {
                report = {e, theta};
            }
        }
    } else {
        // Relaxed positivity on [0, pi], endpoints included.
        for (int s = 0; s < samples; ++s) {
            const double x = samples == 1 ? 0.0 : std::numbers::pi * s / (samples - 1);
            double e = 1.0;
            for (std::size_t i = 0; i < scheme.eta.size(); ++i) {
                e -= scheme.eta[i] * std::cos(static_cast<double>(i + 1) * x);
            }
            if (e < report.min_value) {
                report = {e, x};
            }
        }
    }
    return report;
}

namespace {

// Fejer-Riesz: E(theta) = |gamma(e^{i theta})|^2 with gamma real, roots in the
// closed unit disk. gamma_k multiplies the k-th newest vector.
std::vector<double> fejer_riesz(const std::vector<double>& delta, const std::vector<double>& mu)
{
    const int q = static_cast<int>(delta.size()) - 1;
    // Laurent coefficients c_m, m = -q..q, stored at m + q; the product
    // z^q L(z) is an ordinary polynomial of degree 2q with these coefficients.
    std::vector<double> c(static_cast<std::size_t>(2 * q + 1), 0.0);
    for (int k = 0; k <= q; ++k) {
        for (int l = 0; l <= q; ++l) {
            c[static_cast<std::size_t>(k - l + q)] += 0.5 * (delta[k] * mu[l] + mu[k] * delta[l]);
        }
    }

    // delta(1) = 0 gives a double root at z = 1; remove it exactly.
    std::vector<double> quotient = c;
    for (int pass = 0; pass < 2; ++pass) {
        std::vector<double> next(quotient.size() - 1, 0.0);
        // synthetic division by (z - 1), highest power first
        double carry = 0.0;
        for (std::size_t i = quotient.size(); i-- > 1;) {
            carry = quotient[i] + carry;
            next[i - 1] = carry;
        }
        const double remainder = quotient[0] + carry;
        if (std::abs(remainder) > 1e-9) {
            throw NoMultiplierError("positivity function does not vanish to second order at theta = 0");
        }
        quotient = std::move(next);
    }

    std::vector<std::complex<double>> selected{1.0};
    if (quotient.size() > 1) {
        Eigen::VectorXd coeffs(static_cast<Eigen::Index>(quotient.size()));
        for (std::size_t i = 0; i < quotient.size(); ++i) {
            coeffs[static_cast<Eigen::Index>(i)] = quotient[i];
        }
        Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(coeffs);
        std::vector<std::complex<double>> roots(solver.roots().begin(), solver.roots().end());
        std::sort(roots.begin(), roots.end(),
                  [](auto a, auto b) { return std::abs(a) < std::abs(b); });
        const std::size_t half = roots.size() / 2;
        constexpr double tol = 1e-9;
        for (std::size_t i = 0; i < roots.size(); ++i) {
            const double r = std::abs(roots[i]);
            if (i < half && r > 1.0 + tol) {
                throw NoMultiplierError("Fejer-Riesz factorization: too few roots in the closed unit disk");
            }
            if (i >= half && r < 1.0 - tol) {
                throw NoMultiplierError("Fejer-Riesz factorization: too many roots inside the unit disk");
            }
        }
        selected.insert(selected.end(), roots.begin(), roots.begin() + static_cast<std::ptrdiff_t>(half));
    }

    // Expand prod (z - r).
    std::vector<std::complex<double>> poly{1.0};
    for (const auto r : selected) {
        std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] += poly[i];
            next[i] -= r * poly[i];
        }
        poly = std::move(next);
    }
    std::vector<double> gamma(poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i) {
        gamma[i] = poly[i].real();
    }

    // Normalize at z = -1 where E is strictly positive for BDF.
    double e_pi = 0.0;
    for (int m = -q; m <= q; ++m) {
        e_pi += c[static_cast<std::size_t>(m + q)] * (std::abs(m) % 2 == 0 ? 1.0 : -1.0);
    }
    const double g_pi = std::abs(eval_poly(gamma, -1.0));
    if (e_pi <= 0.0 || g_pi == 0.0) {
        throw NoMultiplierError("Fejer-Riesz factorization: degenerate normalization");
    }
    const double scale = std::sqrt(e_pi) / g_pi;
    for (auto& g : gamma) {
        g *= scale;
    }
    return gamma;
}

} // namespace

GMatrix build_g_matrix(const BdfScheme& scheme)
{
    const int q = scheme.order;
    if (!scheme.scalar_multiplier()) {
        throw NoMultiplierError("G-matrix requires a scalar multiplier (no Nevanlinna-Odeh pair for BDF-6)");
    }
    const auto pos = multiplier_positivity(scheme, 100000);
    if (pos.min_value < kPositivityTolerance) {
        std::ostringstream msg;
        msg << "multiplier eta=" << scheme.eta[0] << " fails positivity for q=" << q
            << ": min E = " << pos.min_value << " at theta = " << pos.location;
        throw NoMultiplierError(msg.str());
    }

    const auto delta = scheme.delta_values();
    const auto mu = multiplier_coefficients(scheme);
    const auto gamma = fejer_riesz(delta, mu);

    // Unknowns: upper triangle of G. Equations: every (k, l), k <= l, of
    // S = E1^T G E1 - E0^T G E0 + gamma gamma^T, indices newest-first.
    std::vector<std::pair<int, int>> unknowns;
    for (int i = 0; i < q; ++i) {
        for (int j = i; j < q; ++j) {
            unknowns.emplace_back(i, j);
        }
    }
    const int n_eq = (q + 1) * (q + 2) / 2;
    Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(n_eq, static_cast<Eigen::Index>(unknowns.size()));
    Eigen::VectorXd rhs(n_eq);
    int row = 0;
    for (int k = 0; k <= q; ++k) {
        for (int l = k; l <= q; ++l, ++row) {
            const double s_kl = 0.5 * (delta[k] * mu[l] + mu[k] * delta[l]);
            rhs[row] = s_kl - gamma[k] * gamma[l];
            for (std::size_t u = 0; u < unknowns.size(); ++u) {
                const auto [i, j] = unknowns[u];
                if (k < q && l < q && i == k && j == l) {
                    lhs(row, static_cast<Eigen::Index>(u)) += 1.0;
                }
                if (k >= 1 && i == k - 1 && j == l - 1) {
                    lhs(row, static_cast<Eigen::Index>(u)) -= 1.0;
                }
            }
        }
    }
    Eigen::VectorXd x = lhs.colPivHouseholderQr().solve(rhs);
    // BDF-1 and BDF-2 with mu = 1 have closed-form G, used to avoid roundoff in the entries
    if (scheme.eta[0] == 0.0 && q <= 2) {
        x = q == 1 ? Eigen::VectorXd::Constant(1, 0.5) : Eigen::Vector3d(1.25, -0.5, 0.25).eval();
    }

    GMatrix out;
    out.order = q;
    out.gamma = gamma;
    out.g = Eigen::MatrixXd::Zero(q, q);
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
        const auto [i, j] = unknowns[u];
        out.g(i, j) = x[static_cast<Eigen::Index>(u)];
        out.g(j, i) = x[static_cast<Eigen::Index>(u)];
    }
    out.residual = (lhs * x - rhs).cwiseAbs().maxCoeff();

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(out.g);
    out.min_eigenvalue = eig.eigenvalues().minCoeff();
    out.max_eigenvalue = eig.eigenvalues().maxCoeff();

    if (out.residual > kIdentityTolerance) {
        throw CertificationError("G-matrix coefficient matching residual " + std::to_string(out.residual));
    }
    if (out.min_eigenvalue <= 0.0) {
        throw CertificationError("G-matrix is not positive definite");
    }
    return out;
}

double g_identity_residual(const BdfScheme& scheme, const GMatrix& g, std::span<const double> values)
{
    const int q = scheme.order;
    if (values.size() != static_cast<std::size_t>(q) + 1) {
        throw DimensionError("g_identity_residual expects q+1 values");
    }
    const auto delta = scheme.delta_values();
    const auto mu = multiplier_coefficients(scheme);
    // w_k = v^{q-k}: newest first
    auto w = [&](int k) { return values[static_cast<std::size_t>(q - k)]; };
    double dv = 0.0;
    double mv = 0.0;
    double gv = 0.0;
    for (int k = 0; k <= q; ++k) {
        dv += delta[k] * w(k);
        mv += mu[k] * w(k);
        gv += g.gamma[static_cast<std::size_t>(k)] * w(k);
    }
    double new_norm = 0.0;
    double old_norm = 0.0;
    for (int i = 0; i < q; ++i) {
        for (int j = 0; j < q; ++j) {
            new_norm += g.g(i, j) * w(i) * w(j);
            old_norm += g.g(i, j) * w(i + 1) * w(j + 1);
        }
    }
    return dv * mv - (new_norm - old_norm + gv * gv);
}

SemiInner euclidean_inner()
{
    return [](const Vector& a, const Vector& b) { return a.dot(b); };
}

SemiInner matrix_inner(const SparseMatrix& a)
{
    auto shared = std::make_shared<const SparseMatrix>(a);
    return [shared](const Vector& u, const Vector& v) { return u.dot(*shared * v); };
}

double g_norm(const GMatrix& g, std::span<const Vector> window, const SemiInner& inner)
{
    const auto q = static_cast<std::size_t>(g.order);
    if (window.size() != q) {
        throw DimensionError("g_norm: window must hold q vectors");
    }
    for (const auto& v : window) {
        if (v.size() != window[0].size()) {
            throw DimensionError("g_norm: window vectors differ in dimension");
        }
    }
    double s = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
        for (std::size_t j = 0; j < q; ++j) {
            s += g.g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * inner(window[i], window[j]);
        }
    }
    return s;
}

} // namespace stokes_bdf
