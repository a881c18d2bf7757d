#include "stokes_bdf/march.hpp"

#include "stokes_bdf/errors.hpp"

#include <cmath>

namespace stokes_bdf {

InitMode parse_init(const std::string& name)
{
    if (name == "ritz") {
        return InitMode::ritz;
    }
    if (name == "interp") {
        return InitMode::interp;
    }
    throw ConfigurationError("unknown init mode '" + name + "' (expected ritz or interp)");
}

std::string to_string(InitMode mode) { return mode == InitMode::ritz ? "ritz" : "interp"; }

SolutionHistory::SolutionHistory(int q, double tau)
    : q_(q)
    , tau_(tau)
{
    if (q < 1) {
        throw InvalidOrderError("history order must be positive");
    }
}

void SolutionHistory::push(StepRecord record)
{
    if (!records_.empty() && record.n != records_.back().n + 1) {
        throw ConfigurationError("history indices must be consecutive");
    }
    records_.push_back(std::move(record));
    if (static_cast<int>(records_.size()) > q_) {
        records_.pop_front();
    }
}

int SolutionHistory::current() const
{
    if (records_.empty()) {
        throw ConfigurationError("empty solution history");
    }
    return records_.back().n;
}

const StepRecord& SolutionHistory::back(int i) const
{
    return records_.at(records_.size() - 1 - static_cast<std::size_t>(i));
}

int MarchConfig::steps() const
{
    if (!(tau > 0.0) || !(T > 0.0)) {
        throw ConfigurationError("tau and T must be positive");
    }
    const double ratio = T / tau;
    const long n = std::lround(ratio);
    if (std::abs(ratio - static_cast<double>(n)) > 1e-8 * std::max(1.0, ratio)) {
        throw ConfigurationError("T / tau must be an integer");
    }
    if (n < scheme.order) {
        throw ConfigurationError("need T >= q tau");
    }
    return static_cast<int>(n);
}

namespace {

SparseMatrix step_matrix(const StokesOperators& ops, double delta0, double tau)
{
    SparseMatrix k = (delta0 / tau) * ops.M + ops.A;
    k.makeCompressed();
    return k;
}

} // namespace

Marcher::Marcher(const StokesOperators& ops, MarchConfig config)
    : ops_(&ops)
    , config_(std::move(config))
    , delta_(config_.scheme.delta_values())
    , solver_(ops, step_matrix(ops, delta_[0], config_.tau), ops.velocity->boundary_dofs())
{
    (void)config_.steps();
}

SolutionHistory Marcher::initialize() const
{
    const auto& ops = *ops_;
    const int q = config_.scheme.order;
    SolutionHistory history(q, config_.tau);
    std::optional<RitzProjector> ritz;
    if (config_.init == InitMode::ritz) {
        ritz.emplace(ops);
    }
    const std::function<double(Point)> zero_pressure = [](Point) { return 0.0; };
    for (int i = 0; i < q; ++i) {
        StepRecord rec;
        rec.n = i;
        rec.t = i * config_.tau;
        if (ritz) {
            auto sol = ritz->project(config_.data.velocity_at(rec.t), config_.data.velocity_gradient_at(rec.t),
                                     zero_pressure);
            rec.u = std::move(sol.u);
            rec.p = std::move(sol.p);
        } else {
            rec.u = interpolate(*ops.velocity, config_.data.velocity_at(rec.t));
        }
        history.push(std::move(rec));
    }
    return history;
}

Vector Marcher::discrete_derivative(std::span<const Vector* const> window) const
{
    if (window.size() != delta_.size()) {
        throw DimensionError("discrete derivative needs q + 1 vectors");
    }
    Vector d = delta_[0] * *window[0];
    for (std::size_t i = 1; i < window.size(); ++i) {
        d += delta_[i] * *window[i];
    }
    return d / config_.tau;
}

const StepRecord& Marcher::step(SolutionHistory& history) const
{
    const auto& ops = *ops_;
    const int q = config_.scheme.order;
    if (!history.full() || history.order() != q) {
        throw ConfigurationError("step needs a full history of the scheme order");
    }
    StepRecord rec;
    rec.n = history.current() + 1;
    rec.t = rec.n * config_.tau;

    Vector lagged = delta_[1] * history.back(0).u;
    for (int i = 2; i <= q; ++i) {
        lagged += delta_[static_cast<std::size_t>(i)] * history.back(i - 1).u;
    }
    Vector rhs = assemble_load(*ops.velocity, config_.data.forcing_at(rec.t, ops.nu));
    rhs -= (ops.M * lagged) / config_.tau;
    const auto trace = apply_dirichlet(*ops.velocity, config_.data.velocity_at(rec.t));
    auto sol = solver_.solve(rhs, Vector::Zero(ops.pressure->num_dofs()), trace.values);
    rec.u = std::move(sol.u);
    rec.p = std::move(sol.p);
    history.push(std::move(rec));
    return history.back(0);
}

Trajectory Marcher::run() const { return run_from(initialize()); }

Trajectory Marcher::run_from(SolutionHistory history) const
{
    const auto& ops = *ops_;
    const int q = config_.scheme.order;
    const int N = config_.steps();
    if (!history.full() || history.current() != q - 1) {
        throw ConfigurationError("run needs starting values at steps 0..q-1");
    }
    Trajectory traj;
    traj.q = q;
    traj.tau = config_.tau;
    traj.records.reserve(static_cast<std::size_t>(N + 1));
    for (int i = q - 1; i >= 0; --i) {
        traj.records.push_back(history.back(i));
    }
    const int degree = load_quadrature_degree(ops.velocity->degree());
    for (int n = q; n <= N; ++n) {
        traj.records.push_back(step(history));
        traj.forcing_norms.push_back(l2_norm(ops.velocity->mesh(), config_.data.forcing_at(n * config_.tau, ops.nu), degree));
    }
    return traj;
}

} // namespace stokes_bdf
