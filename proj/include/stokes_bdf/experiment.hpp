#pragma once

#include "stokes_bdf/assembly.hpp"
#include "stokes_bdf/bdf.hpp"
#include "stokes_bdf/diagnostics.hpp"
#include "stokes_bdf/march.hpp"

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace stokes_bdf {

enum class Experiment { converge_time, converge_space, small_step, stability, multiplier_check };

Experiment parse_experiment(const std::string& name);
std::string to_string(Experiment e);

/// Mesh, spaces and operators for one (n, k) pair. Equal-order P_k/P_k, or
/// P_k/P_{k-1} when stab = none.
struct Discretization {
    std::shared_ptr<const Mesh> mesh;
    StokesOperators ops;
};

Discretization make_discretization(int n, int k, double nu, Stabilization stab, double gamma);

struct PointSpec {
    int q = 1;
    int k = 1;
    int n = 8;
    double tau = 0.1;
    double T = 1.0;
    double nu = 1.0;
    Stabilization stab = Stabilization::cip;
    double gamma = 0.05;
    InitMode init = InitMode::ritz;
    std::string case_name = "paper";
};

struct PointResult {
    PointSpec spec;
    double h = 0.0;
    NormReport norms;
    std::optional<StabilityReport> stability;
};

/// One simulation with error norms (and stability ratios on request).
PointResult run_point(const PointSpec& spec, bool with_stability);

struct ExperimentConfig {
    Experiment experiment = Experiment::converge_time;
    int q = 1;
    int k = 1;
    std::vector<int> n{8};
    std::vector<double> tau{0.1};
    double T = 1.0;
    double nu = 1.0;
    Stabilization stab = Stabilization::cip;
    std::optional<double> gamma;
    InitMode init = InitMode::ritz;
    std::string case_name = "paper";
    std::string out;
    int samples = 100000;
    MultiplierSet multipliers = MultiplierSet::classical;

    /// Throws ConfigurationError naming the offending field.
    void validate() const;
    [[nodiscard]] double effective_gamma() const { return gamma.value_or(default_gamma(stab)); }
};

/// Reads a JSON object; recognised keys match the long CLI flag names.
ExperimentConfig config_from_json(const std::string& text, ExperimentConfig base = {});

/// Parameter points of a sweep in CSV order.
std::vector<PointSpec> expand_points(const ExperimentConfig& config);

struct ExperimentOutcome {
    std::vector<PointResult> points;
    std::string summary;
    bool ok = true;
};

/// Runs the sweep using up to `threads` workers; results keep parameter order.
ExperimentOutcome run_experiment(const ExperimentConfig& config, int threads);

/// Worker cap from STOKES_BDF_THREADS, defaulting to the hardware count.
int thread_budget();

extern const char* const kCsvHeader;

void write_csv(std::ostream& os, Experiment experiment, const std::vector<PointResult>& points);

/// Single-line positivity and G-matrix report; `ok` is false when the
/// multiplier fails positivity or certification.
struct MultiplierReport {
    std::string line;
    bool ok = true;
};

MultiplierReport multiplier_check(int q, int samples, MultiplierSet set = MultiplierSet::classical);

} // namespace stokes_bdf
