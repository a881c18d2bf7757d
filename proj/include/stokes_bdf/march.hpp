#pragma once

#include "stokes_bdf/bdf.hpp"
#include "stokes_bdf/mms.hpp"
#include "stokes_bdf/stokes.hpp"

#include <deque>
#include <optional>
#include <string>
#include <vector>

namespace stokes_bdf {

enum class InitMode { ritz, interp };

InitMode parse_init(const std::string& name);
std::string to_string(InitMode mode);

struct StepRecord {
    int n = 0;
    double t = 0.0;
    Vector u;
    std::optional<Vector> p; ///< absent for interpolated starting values
};

/// The last q records, newest at the back, with consecutive indices.
class SolutionHistory {
public:
    SolutionHistory(int q, double tau);

    void push(StepRecord record);
    [[nodiscard]] bool full() const { return static_cast<int>(records_.size()) == q_; }
    [[nodiscard]] int order() const { return q_; }
    [[nodiscard]] double tau() const { return tau_; }
    /// Index of the latest stored step.
    [[nodiscard]] int current() const;
    /// back(0) is the latest, back(q-1) the oldest.
    [[nodiscard]] const StepRecord& back(int i) const;
    [[nodiscard]] std::size_t size() const { return records_.size(); }

private:
    int q_;
    double tau_;
    std::deque<StepRecord> records_;
};

struct MarchConfig {
    BdfScheme scheme;
    double tau = 0.1;
    double T = 1.0;
    InitMode init = InitMode::ritz;
    ManufacturedCase data;

    /// N = T / tau, rounded; throws ConfigurationError unless integral and N >= q.
    [[nodiscard]] int steps() const;
};

struct Trajectory {
    int q = 0;
    double tau = 0.0;
    std::vector<StepRecord> records;  ///< n = 0..N
    std::vector<double> forcing_norms; ///< ||f(t_n)||_H for n = q..N
};

/// Fully discrete BDF-q loop with system matrix (delta_0/tau) M + A.
class Marcher {
public:
    Marcher(const StokesOperators& ops, MarchConfig config);

    [[nodiscard]] const MarchConfig& config() const { return config_; }
    [[nodiscard]] const SaddleSolver& solver() const { return solver_; }

    /// Starting values at t_0..t_{q-1}.
    [[nodiscard]] SolutionHistory initialize() const;

    /// Computes step history.current() + 1 and rotates the history.
    const StepRecord& step(SolutionHistory& history) const;

    /// initialize() followed by N - q + 1 steps.
    [[nodiscard]] Trajectory run() const;
    /// Same, from caller-provided starting values.
    [[nodiscard]] Trajectory run_from(SolutionHistory history) const;

    /// (1/tau) sum_i delta_i u^{n-i} over a window with window[0] = u^n.
    [[nodiscard]] Vector discrete_derivative(std::span<const Vector* const> window) const;

private:
    const StokesOperators* ops_;
    MarchConfig config_;
    std::vector<double> delta_;
    SaddleSolver solver_;
};

} // namespace stokes_bdf
