#pragma once

#include "stokes_bdf/types.hpp"

#include <Eigen/Dense>
#include <boost/rational.hpp>

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace stokes_bdf {

using Rational = boost::rational<std::int64_t>;

/// Which multiplier values accompany a scheme for q = 3..5.
///
/// `classical` carries the tabulated Nevanlinna-Odeh values 0.0769, 0.2878,
/// 0.8097. Dense sampling shows that these values do not satisfy the positivity
/// condition on the unit circle (the admissible thresholds are 0.083592,
/// 0.287807 and 0.815980). `certified` rounds those thresholds up to four
/// digits so that a G-matrix exists.
enum class MultiplierSet { classical, certified };

/// q-step backward differentiation formula with its energy multiplier.
///
/// `delta` holds delta_0..delta_q exactly. `eta` has length 1 for a scalar
/// multiplier mu(z) = 1 - eta z, and length 6 for the relaxed BDF-6 multiplier
/// mu(z) = 1 - sum_i eta_i z^i.
struct BdfScheme {
    int order = 0;
    std::vector<Rational> delta;
    std::vector<double> eta;

    [[nodiscard]] double delta_value(int i) const { return boost::rational_cast<double>(delta.at(i)); }
    [[nodiscard]] std::vector<double> delta_values() const;
    [[nodiscard]] bool scalar_multiplier() const { return eta.size() == 1; }
};

BdfScheme make_scheme(int order, MultiplierSet set = MultiplierSet::classical);

/// Same coefficients, different multiplier vector.
BdfScheme with_multiplier(BdfScheme scheme, std::vector<double> eta);

struct PositivityReport {
    double min_value = 0.0;
    double location = 0.0; ///< argmin: theta in [0, 2pi) for scalar, x in [0, pi] for relaxed
};

/// Minimum of the positivity function on a uniform sample.
///
/// Scalar multiplier: E(theta) = Re[delta(e^{i theta}) conj(mu(e^{i theta}))].
/// Relaxed multiplier: 1 - sum_i eta_i cos(i x) on [0, pi].
PositivityReport multiplier_positivity(const BdfScheme& scheme, int samples);

/// E(theta) for a scalar multiplier.
double positivity_function(const BdfScheme& scheme, double theta);

inline constexpr double kPositivityTolerance = -1e-12;
inline constexpr double kIdentityTolerance = 1e-10;

struct GMatrix {
    int order = 0;
    Eigen::MatrixXd g;          ///< newest-first: g(0,0) weights the latest vector
    std::vector<double> gamma;  ///< gamma_0..gamma_q, gamma_0 pairs with the latest vector
    double residual = 0.0;      ///< max abs residual of the coefficient-matching system
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
};

/// Dahlquist G-matrix for (delta, mu) via Fejer-Riesz factorization and
/// least-squares coefficient matching; certified before returning.
GMatrix build_g_matrix(const BdfScheme& scheme);

/// Residual of the scalar G-stability identity on one sequence.
///
/// `values` holds q+1 entries ordered oldest to newest (v^0..v^q):
///   (sum_i delta_i v^{q-i})(sum_j mu_j v^{q-j})
///     - [ |V^q|_G^2 - |V^{q-1}|_G^2 + (sum_i gamma_i v^{q-i})^2 ].
double g_identity_residual(const BdfScheme& scheme, const GMatrix& g, std::span<const double> values);

using SemiInner = std::function<double(const Vector&, const Vector&)>;

SemiInner euclidean_inner();
/// (u, v) -> u^T A v for a symmetric positive semi-definite A.
SemiInner matrix_inner(const SparseMatrix& a);

/// |V|_G^2 = sum_ij g_ij (v_i, v_j), window[0] the latest vector.
double g_norm(const GMatrix& g, std::span<const Vector> window, const SemiInner& inner);

} // namespace stokes_bdf
