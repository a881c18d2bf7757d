#include "stokes_bdf/experiment.hpp"

#include "stokes_bdf/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace stokes_bdf {

Experiment parse_experiment(const std::string& name)
{
    if (name == "converge-time") {
        return Experiment::converge_time;
    }
    if (name == "converge-space") {
        return Experiment::converge_space;
    }
    if (name == "small-step") {
        return Experiment::small_step;
    }
    if (name == "stability") {
        return Experiment::stability;
    }
    if (name == "multiplier-check") {
        return Experiment::multiplier_check;
    }
    throw ConfigurationError("experiment: unknown value '" + name + "'");
}

std::string to_string(Experiment e)
{
    switch (e) {
    case Experiment::converge_time:
        return "converge-time";
    case Experiment::converge_space:
        return "converge-space";
    case Experiment::small_step:
        return "small-step";
    case Experiment::stability:
        return "stability";
    case Experiment::multiplier_check:
        return "multiplier-check";
    }
    return "unknown";
}

Discretization make_discretization(int n, int k, double nu, Stabilization stab, double gamma)
{
    Discretization d;
    d.mesh = std::make_shared<const Mesh>(n);
    const int kp = stab == Stabilization::none ? k - 1 : k;
    if (kp < 1) {
        throw ConfigurationError("stab=none needs velocity degree k >= 2 (Taylor-Hood P_k/P_{k-1})");
    }
    const FeSpace V(d.mesh, k, 2);
    const FeSpace Q(d.mesh, kp, 1);
    d.ops = assemble_operators(V, Q, nu, stab, gamma);
    return d;
}

PointResult run_point(const PointSpec& spec, bool with_stability)
{
    const auto disc = make_discretization(spec.n, spec.k, spec.nu, spec.stab, spec.gamma);
    MarchConfig mc;
    mc.scheme = make_scheme(spec.q);
    mc.tau = spec.tau;
    mc.T = spec.T;
    mc.init = spec.init;
    mc.data = case_by_name(spec.case_name);
    const Marcher marcher(disc.ops, mc);
    const auto traj = marcher.run();

    PointResult r;
    r.spec = spec;
    r.h = disc.mesh->h();
    r.norms = error_norms(traj, disc.ops, mc.data, mc.scheme);
    if (with_stability) {
        r.stability = stability_ratios(traj, disc.ops, mc.scheme);
    }
    return r;
}

namespace {

void require(bool cond, const std::string& field, const std::string& what)
{
    if (!cond) {
        throw ConfigurationError(field + ": " + what);
    }
}

bool doubles_by_two(const std::vector<double>& v, bool decreasing)
{
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const double r = decreasing ? v[i] / v[i + 1] : v[i + 1] / v[i];
        if (std::abs(r - 2.0) > 1e-9) {
            return false;
        }
    }
    return true;
}

} // namespace

void ExperimentConfig::validate() const
{
    if (experiment == Experiment::multiplier_check) {
        require(q >= 1 && q <= 6, "q", "must be in 1..6");
        require(samples >= 1000, "samples", "must be at least 1000");
        return;
    }
    require(q >= 1 && q <= 6, "q", "must be in 1..6");
    require(k >= 1 && k <= kMaxDegree, "k", "must be in 1.." + std::to_string(kMaxDegree));
    require(!n.empty(), "n", "needs at least one value");
    for (int v : n) {
        require(v >= 2, "n", "subdivisions must be >= 2");
    }
    require(!tau.empty(), "tau", "needs at least one value");
    for (double v : tau) {
        require(v > 0.0 && std::isfinite(v), "tau", "steps must be positive");
    }
    require(T > 0.0 && std::isfinite(T), "T", "must be positive");
    require(nu > 0.0 && std::isfinite(nu), "nu", "must be positive");
    require(effective_gamma() >= 0.0, "gamma", "must be nonnegative");
    if (stab == Stabilization::none) {
        require(k >= 2, "stab", "none needs k >= 2 (Taylor-Hood)");
    }
    (void)case_by_name(case_name);
    if (experiment == Experiment::converge_time) {
        require(doubles_by_two(tau, true), "tau", "list must halve at each entry");
    }
    if (experiment == Experiment::converge_space) {
        std::vector<double> nd(n.begin(), n.end());
        require(doubles_by_two(nd, false), "n", "list must double at each entry");
    }
    if (experiment != Experiment::small_step) {
        for (double v : tau) {
            const double ratio = T / v;
            require(std::abs(ratio - std::round(ratio)) <= 1e-8 * std::max(1.0, ratio), "tau",
                    "T / tau must be an integer");
            require(std::round(ratio) >= q, "tau", "needs T >= q tau");
        }
    }
}

ExperimentConfig config_from_json(const std::string& text, ExperimentConfig base)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigurationError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigurationError("config: top level must be an object");
    }
    static const std::set<std::string> known{"experiment", "q", "k", "n", "tau", "T", "nu", "stab",
                                             "gamma", "init", "case", "out", "samples", "multiplier"};
    auto& c = base;
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) {
            throw ConfigurationError("config field '" + key + "': unknown key");
        }
        try {
            if (key == "experiment") {
                c.experiment = parse_experiment(value.get<std::string>());
            } else if (key == "q") {
                c.q = value.get<int>();
            } else if (key == "k") {
                c.k = value.get<int>();
            } else if (key == "n") {
                c.n = value.is_array() ? value.get<std::vector<int>>() : std::vector<int>{value.get<int>()};
            } else if (key == "tau") {
                c.tau = value.is_array() ? value.get<std::vector<double>>() : std::vector<double>{value.get<double>()};
            } else if (key == "T") {
                c.T = value.get<double>();
            } else if (key == "nu") {
                c.nu = value.get<double>();
            } else if (key == "stab") {
                c.stab = parse_stabilization(value.get<std::string>());
            } else if (key == "gamma") {
                c.gamma = value.get<double>();
            } else if (key == "init") {
                c.init = parse_init(value.get<std::string>());
            } else if (key == "case") {
                c.case_name = value.get<std::string>();
            } else if (key == "out") {
                c.out = value.get<std::string>();
            } else if (key == "samples") {
                c.samples = value.get<int>();
            } else if (key == "multiplier") {
                const auto s = value.get<std::string>();
                if (s == "classical") {
                    c.multipliers = MultiplierSet::classical;
                } else if (s == "certified") {
                    c.multipliers = MultiplierSet::certified;
                } else {
                    throw ConfigurationError("expected classical or certified");
                }
            }
        } catch (const nlohmann::json::exception& e) {
            throw ConfigurationError("config field '" + key + "': " + e.what());
        } catch (const ConfigurationError& e) {
            throw ConfigurationError("config field '" + key + "': " + e.what());
        }
    }
    return c;
}

std::vector<PointSpec> expand_points(const ExperimentConfig& config)
{
    PointSpec base;
    base.q = config.q;
    base.k = config.k;
    base.T = config.T;
    base.nu = config.nu;
    base.stab = config.stab;
    base.gamma = config.effective_gamma();
    base.init = config.init;
    base.case_name = config.case_name;

    std::vector<PointSpec> out;
    auto add = [&](int n, double tau, InitMode init) {
        PointSpec p = base;
        p.n = n;
        p.tau = tau;
        p.init = init;
        out.push_back(p);
    };
    switch (config.experiment) {
    case Experiment::converge_time:
    case Experiment::stability:
        for (int n : config.n) {
            for (double tau : config.tau) {
                add(n, tau, config.init);
            }
        }
        break;
    case Experiment::converge_space:
        for (double tau : config.tau) {
            for (int n : config.n) {
                add(n, tau, config.init);
            }
        }
        break;
    case Experiment::small_step:
        for (int n : config.n) {
            for (double tau : config.tau) {
                for (InitMode init : {InitMode::ritz, InitMode::interp}) {
                    add(n, tau, init);
                    out.back().T = config.q * tau;
                }
            }
        }
        break;
    case Experiment::multiplier_check:
        break;
    }
    return out;
}

int thread_budget()
{
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    hw = std::max(1, hw);
    if (const char* env = std::getenv("STOKES_BDF_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) {
            return static_cast<int>(std::min<long>(v, hw));
        }
    }
    return hw;
}

namespace {

std::string fmt(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

} // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& config, int threads)
{
    config.validate();
    ExperimentOutcome outcome;
    if (config.experiment == Experiment::multiplier_check) {
        const auto rep = multiplier_check(config.q, config.samples, config.multipliers);
        outcome.summary = rep.line + "\n";
        outcome.ok = rep.ok;
        return outcome;
    }
    const auto specs = expand_points(config);
    const bool with_stability = config.experiment == Experiment::stability;
    std::vector<std::optional<PointResult>> results(specs.size());
    std::vector<std::string> errors(specs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < specs.size(); i = next++) {
            try {
                results[i] = run_point(specs[i], with_stability);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(specs.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool) {
        th.join();
    }

    std::ostringstream summary;
    summary << to_string(config.experiment) << ": " << specs.size() << " point(s), q=" << config.q
            << ", k=" << config.k << ", case=" << config.case_name << "\n";
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto& s = specs[i];
        summary << "  n=" << s.n << " tau=" << fmt(s.tau) << " init=" << to_string(s.init) << ": ";
        if (!results[i]) {
            outcome.ok = false;
            summary << "FAILED (" << errors[i] << ")\n";
            continue;
        }
        const auto& r = *results[i];
        summary << std::setprecision(4) << std::scientific << "linf_H=" << r.norms.err_linf_H
                << " l2_V=" << r.norms.err_l2_V << " l2_Q=" << r.norms.err_l2_Q;
        if (config.experiment == Experiment::small_step) {
            summary << " smallstep_p=" << r.norms.smallstep_p;
        }
        if (r.stability) {
            summary << " ratios=" << r.stability->velocity.ratio << "," << r.stability->acceleration.ratio << ","
                    << r.stability->pressure.ratio;
        }
        summary << std::defaultfloat << "\n";
        outcome.points.push_back(r);
    }
    outcome.summary = summary.str();
    return outcome;
}

const char* const kCsvHeader = "experiment,case,q,k,n,h,tau,nu,stab,gamma,init,err_linf_H,err_l2_V,err_l2_Q,"
                               "seminorm_jh,accel_l2_H,smallstep_p,ratio_thm41,ratio_thm42,ratio_thm43";

void write_csv(std::ostream& os, Experiment experiment, const std::vector<PointResult>& points)
{
    os << kCsvHeader << "\n";
    for (const auto& r : points) {
        const auto& s = r.spec;
        os << to_string(experiment) << ',' << s.case_name << ',' << s.q << ',' << s.k << ',' << s.n << ','
           << fmt(r.h) << ',' << fmt(s.tau) << ',' << fmt(s.nu) << ',' << to_string(s.stab) << ','
           << fmt(s.gamma) << ',' << to_string(s.init) << ',' << fmt(r.norms.err_linf_H) << ','
           << fmt(r.norms.err_l2_V) << ',' << fmt(r.norms.err_l2_Q) << ',' << fmt(r.norms.seminorm_jh) << ','
           << fmt(r.norms.accel_l2_H) << ',';
        if (experiment == Experiment::small_step) {
            os << fmt(r.norms.smallstep_p);
        }
        os << ',';
        if (r.stability) {
            os << fmt(r.stability->velocity.ratio) << ',' << fmt(r.stability->acceleration.ratio) << ','
               << fmt(r.stability->pressure.ratio);
        } else {
            os << ",,";
        }
        os << "\n";
    }
}

MultiplierReport multiplier_check(int q, int samples, MultiplierSet set)
{
    const auto scheme = make_scheme(q, set);
    const auto pos = multiplier_positivity(scheme, samples);
    std::ostringstream os;
    os << std::setprecision(6);
    os << "q=" << q << " multiplier=";
    for (std::size_t i = 0; i < scheme.eta.size(); ++i) {
        os << (i ? "," : "") << scheme.eta[i];
    }
    os << " min=" << std::scientific << pos.min_value << std::defaultfloat << " location=" << pos.location;
    MultiplierReport rep;
    if (!scheme.scalar_multiplier()) {
        rep.ok = pos.min_value > 0.0;
        os << " relaxed-positivity=" << (rep.ok ? "holds" : "fails") << " G=n/a";
    } else if (pos.min_value < kPositivityTolerance) {
        rep.ok = false;
        os << " positivity=fails G=none";
    } else {
        try {
            const auto g = build_g_matrix(scheme);
            os << " positivity=holds G-eigenvalues=[" << std::scientific << g.min_eigenvalue << ", "
               << g.max_eigenvalue << "]";
        } catch (const std::exception& e) {
            rep.ok = false;
            os << " positivity=holds G=uncertified (" << e.what() << ")";
        }
    }
    rep.line = os.str();
    return rep;
}

} // namespace stokes_bdf
