#include "stokes_bdf/errors.hpp"
#include "stokes_bdf/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using namespace stokes_bdf;

// "0.025", "1/40" or "1e-3"
double parse_number(const std::string& s)
{
    const auto slash = s.find('/');
    std::size_t used = 0;
    if (slash != std::string::npos) {
        const std::string a = s.substr(0, slash);
        const std::string b = s.substr(slash + 1);
        std::size_t ub = 0;
        const double num = std::stod(a, &used);
        const double den = std::stod(b, &ub);
        if (used != a.size() || ub != b.size() || den == 0.0) {
            throw std::invalid_argument(s);
        }
        return num / den;
    }
    const double v = std::stod(s, &used);
    if (used != s.size()) {
        throw std::invalid_argument(s);
    }
    return v;
}

template <typename T>
std::vector<T> parse_list(const std::string& field, const std::string& text)
{
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            if constexpr (std::is_same_v<T, int>) {
                std::size_t used = 0;
                const int v = std::stoi(item, &used);
                if (used != item.size()) {
                    throw std::invalid_argument(item);
                }
                out.push_back(v);
            } else {
                out.push_back(parse_number(item));
            }
        } catch (const std::exception&) {
            throw ConfigurationError(field + ": cannot parse '" + item + "'");
        }
    }
    if (out.empty()) {
        throw ConfigurationError(field + ": empty list");
    }
    return out;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigurationError("config: cannot open '" + path + "'");
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"BDF-1..6 transient Stokes finite-element experiments"};

    std::string config_path, experiment, n_list, tau_list, T, stab, init, case_name, out, multiplier;
    int q = 0, k = 0, samples = 0;
    double nu = 0.0, gamma = 0.0;

    app.add_option("--config", config_path, "JSON file with defaults; flags override it");
    auto* o_exp = app.add_option("--experiment", experiment,
                                 "converge-time | converge-space | small-step | stability | multiplier-check");
    auto* o_q = app.add_option("--q", q, "BDF order 1..6");
    auto* o_k = app.add_option("--k", k, "velocity polynomial degree");
    auto* o_n = app.add_option("--n", n_list, "mesh subdivisions, comma separated");
    auto* o_tau = app.add_option("--tau", tau_list, "time steps, comma separated (fractions like 1/40 allowed)");
    auto* o_T = app.add_option("--T", T, "final time (default 1)");
    auto* o_nu = app.add_option("--nu", nu, "viscosity (default 1)");
    auto* o_stab = app.add_option("--stab", stab, "cip | bp | none (default cip)");
    auto* o_gamma = app.add_option("--gamma", gamma, "stabilization weight (default 0.05 cip, 0.01 bp)");
    auto* o_init = app.add_option("--init", init, "ritz | interp (default ritz)");
    auto* o_case = app.add_option("--case", case_name, "paper | paper-steady-g1 | space-exact:<m> (default paper)");
    auto* o_out = app.add_option("--out", out, "CSV output path (default stdout)");
    auto* o_samples = app.add_option("--samples", samples, "multiplier-check sample count (default 100000)");
    auto* o_mult = app.add_option("--multiplier", multiplier, "classical | certified (multiplier-check)");

    CLI11_PARSE(app, argc, argv);

    try {
        ExperimentConfig cfg;
        if (!config_path.empty()) {
            cfg = config_from_json(slurp(config_path));
        }
        if (*o_exp) cfg.experiment = parse_experiment(experiment);
        if (*o_q) cfg.q = q;
        if (*o_k) cfg.k = k;
        if (*o_n) cfg.n = parse_list<int>("n", n_list);
        if (*o_tau) cfg.tau = parse_list<double>("tau", tau_list);
        if (*o_T) cfg.T = parse_list<double>("T", T).front();
        if (*o_nu) cfg.nu = nu;
        if (*o_stab) cfg.stab = parse_stabilization(stab);
        if (*o_gamma) cfg.gamma = gamma;
        if (*o_init) cfg.init = parse_init(init);
        if (*o_case) cfg.case_name = case_name;
        if (*o_out) cfg.out = out;
        if (*o_samples) cfg.samples = samples;
        if (*o_mult) {
            if (multiplier == "classical") {
                cfg.multipliers = MultiplierSet::classical;
            } else if (multiplier == "certified") {
                cfg.multipliers = MultiplierSet::certified;
            } else {
                throw ConfigurationError("multiplier: expected classical or certified");
            }
        }

        const auto outcome = run_experiment(cfg, thread_budget());
        if (cfg.experiment == Experiment::multiplier_check) {
            std::cout << outcome.summary;
            return outcome.ok ? 0 : 1;
        }
        std::cerr << outcome.summary;
        if (cfg.out.empty()) {
            write_csv(std::cout, cfg.experiment, outcome.points);
        } else {
            std::ofstream file(cfg.out);
            if (!file) {
                throw ConfigurationError("out: cannot write '" + cfg.out + "'");
            }
            write_csv(file, cfg.experiment, outcome.points);
        }
        return outcome.ok ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
