#pragma once

#include "stokes_bdf/assembly.hpp"
#include "stokes_bdf/bdf.hpp"
#include "stokes_bdf/march.hpp"
#include "stokes_bdf/mms.hpp"

#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace stokes_bdf {

/// Poincare constant of the unit square with Dirichlet data: 1 / sqrt(2 pi^2).
inline constexpr double kPoincare = 1.0 / (std::numbers::pi * std::numbers::sqrt2);

enum class NormKind { l2, linf };

/// l2: sqrt(tau sum v^2); linf: max |v|.
double discrete_norm(std::span<const double> values, double tau, NormKind kind);

struct FieldErrors {
    double u_H = 0.0; ///< ||u - u_h||
    double u_V = 0.0; ///< nu^{1/2} ||grad(u - u_h)||
    double p_Q = 0.0; ///< nu^{-1/2} ||(p - p_h) - mean||; 0 without a pressure
    bool has_pressure = false;
};

/// Spatial errors at time t by the load-degree rule.
FieldErrors field_errors(const StokesOperators& ops, const Vector& u, const Vector* p, const ManufacturedCase& exact,
                         double t);

struct NormReport {
    double err_linf_H = 0.0;  ///< max over n = 0..N
    double err_final_H = 0.0;
    double err_l2_V = 0.0;    ///< over n = q..N
    double err_l2_Q = 0.0;
    double seminorm_jh = 0.0; ///< l2(J_q; j_h) of p_h
    double accel_l2_H = 0.0;  ///< l2(J_q; H) of the BDF derivative of u_h
    double smallstep_p = 0.0; ///< tau^{1/2} ||p(t_q) - p_h^q||_Q
    std::vector<FieldErrors> per_step;
};

NormReport error_norms(const Trajectory& traj, const StokesOperators& ops, const ManufacturedCase& exact,
                       const BdfScheme& scheme);

struct TheoremRatio {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool zero_rhs = false;
    /// starting pressures are absent, so the bound is not guaranteed
    bool conditional = false;
};

struct StabilityReport {
    TheoremRatio velocity;     ///< energy bound on u_h, its l2(V) norm and the j_h seminorm
    TheoremRatio acceleration; ///< bound on the BDF derivative and final V / j_h values
    TheoremRatio pressure;     ///< l2(Q) pressure bound
    double poincare = kPoincare;
};

/// Both sides of the three stability estimates evaluated on steps q..last
/// (default: the whole trajectory).
StabilityReport stability_ratios(const Trajectory& traj, const StokesOperators& ops, const BdfScheme& scheme,
                                 std::optional<int> last = std::nullopt);

/// BDF derivative of u_h at step n >= q.
Vector bdf_derivative(const Trajectory& traj, const BdfScheme& scheme, int n);

/// |U^n|_G^2 with the M inner product for n = q-1..N.
std::vector<double> g_norm_sequence(const Trajectory& traj, const StokesOperators& ops, const GMatrix& g);

struct RateFit {
    std::vector<double> pairwise; ///< log(e_i / e_{i+1}) / log(x_i / x_{i+1})
    double slope = 0.0;           ///< least-squares slope of log e against log x
};

RateFit fit_rate(std::span<const double> x, std::span<const double> errors);

} // namespace stokes_bdf
