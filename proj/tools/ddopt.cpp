#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ddopt/analysis.hpp"
#include "ddopt/errors.hpp"
#include "ddopt/experiments.hpp"
#include "ddopt/trace_io.hpp"

namespace {

using ddopt::Vector;

struct Options {
    std::string experiment;
    std::string algorithm = "rcm";
    std::vector<std::string> sets;
    std::size_t iters = 200;
    std::string eta = "auto";
    std::uint64_t seed = 0;
    std::string output;
    std::string format = "csv";
    bool bound = false;
    std::size_t grid = 201;
    double tol = 1e-10;
    std::vector<std::string> sweeps;
};

std::map<std::string, double> parse_overrides(const std::vector<std::string>& sets) {
    std::map<std::string, double> kv;
    for (const auto& s : sets) {
        auto pos = s.find('=');
        if (pos == std::string::npos)
            throw CLI::ValidationError("--set", "expected key=value, got '" + s + "'");
        try {
            kv[s.substr(0, pos)] = std::stod(s.substr(pos + 1));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--set", "non-numeric value in '" + s + "'");
        }
    }
    return kv;
}

struct BuiltProblem {
    ddopt::PerformativeProblem problem;
    Vector x0;
};

double take(std::map<std::string, double>& kv, const std::string& key, double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    double v = it->second;
    kv.erase(it);
    return v;
}

BuiltProblem build_problem(const std::string& experiment, std::map<std::string, double> kv) {
    BuiltProblem b;
    if (experiment == "market") {
        ddopt::MarketParams mp;
        mp.a1 = take(kv, "a1", mp.a1);
        mp.a2 = take(kv, "a2", mp.a2);
        mp.a3 = take(kv, "a3", mp.a3);
        mp.a4 = take(kv, "a4", mp.a4);
        mp.zeta_L1 = take(kv, "zeta_L1", mp.zeta_L1);
        mp.zeta_R1 = take(kv, "zeta_R1", mp.zeta_R1);
        mp.zeta_L2 = take(kv, "zeta_L2", mp.zeta_L2);
        mp.zeta_R2 = take(kv, "zeta_R2", mp.zeta_R2);
        mp.e1 = take(kv, "e1", mp.e1);
        mp.v1_lower = take(kv, "v1_lower", mp.v1_lower);
        mp.v2_lower = take(kv, "v2_lower", mp.v2_lower);
        mp.eps = take(kv, "eps", mp.eps);
        mp.eps_g = take(kv, "eps_g", mp.eps_g);
        b.x0 = {take(kv, "x0_0", 1.0), take(kv, "x0_1", 1.0)};
        b.problem = ddopt::market_problem(mp);
    } else if (experiment == "pricing") {
        ddopt::PricingParams pp;
        pp.v = take(kv, "v", pp.v);
        pp.t = take(kv, "t", pp.t);
        pp.c1 = take(kv, "c1", pp.c1);
        pp.c2 = take(kv, "c2", pp.c2);
        pp.eta = take(kv, "eta", pp.eta);
        pp.x0 = take(kv, "x0", pp.x0);
        pp.x_bar = take(kv, "x_bar", pp.x_bar);
        pp.A = take(kv, "A", pp.A);
        pp.eps = take(kv, "eps", pp.eps);
        double z2 = take(kv, "base_z2_mean", 6.0);
        double zm = take(kv, "base_zeta_mean", 0.7);
        double zv = take(kv, "zeta_variance", 0.0);
        b.x0 = {pp.x0};
        b.problem = ddopt::pricing_problem(pp, z2, zm, zv);
    } else if (experiment == "one-dim") {
        double theta = take(kv, "theta", 0.5);
        b.x0 = {take(kv, "x0", 1.0)};
        b.problem = ddopt::one_dim_example(theta);
    } else {
        throw CLI::ValidationError("--experiment",
                                   "unknown experiment '" + experiment +
                                       "' (expected market, pricing, or one-dim)");
    }
    if (!kv.empty())
        throw CLI::ValidationError("--set", "unknown parameter key '" + kv.begin()->first + "'");
    return b;
}

double resolve_eta(const std::string& eta, const ddopt::PerformativeProblem& p) {
    if (eta != "auto") return std::stod(eta);
    auto r = ddopt::compute_constants(p);
    if (!r.window_defined)
        throw ddopt::AssumptionViolation(
            "--eta auto: the contraction step window is undefined for these parameters; pass an "
            "explicit --eta value");
    return r.eta_mid();
}

struct RunOutcome {
    ddopt::Trace trace;
    std::string summary;
};

RunOutcome run_once(const Options& opt, const std::map<std::string, double>& kv) {
    BuiltProblem b = build_problem(opt.experiment, kv);

    ddopt::Trace trace;
    if (opt.algorithm == "rcm") {
        ddopt::RCMConfig cfg;
        cfg.max_iterations = opt.iters;
        trace = ddopt::rcm(b.problem, b.x0, cfg);
    } else if (opt.algorithm == "rda") {
        ddopt::RDAConfig cfg;
        cfg.max_iterations = opt.iters;
        cfg.eta = resolve_eta(opt.eta, b.problem);
        trace = ddopt::rda(b.problem, b.x0, cfg);
    } else {
        throw CLI::ValidationError("--algorithm", "expected rcm or rda");
    }

    std::string final_dist = "n/a";
    std::string contraction = "n/a";
    auto constants = ddopt::compute_constants(b.problem);
    if (constants.rcm_condition && trace.status != ddopt::RunStatus::Diverged) {
        try {
            Vector x_s = ddopt::equilibrium_oracle(b.problem, b.x0, 1e-10);
            ddopt::set_reference(trace, x_s);
            final_dist = std::to_string(trace.records.back().dist_to_reference);
            auto ratios = ddopt::measured_contraction(trace, x_s, 1e-10);
            double worst = 0.0;
            for (double r : ratios) worst = std::max(worst, r);
            contraction = std::to_string(worst);
        } catch (const ddopt::InsufficientData&) {
        } catch (const ddopt::NoConvergence&) {
        }
    }

    RunOutcome out;
    out.summary = "status=" + ddopt::to_string(trace.status) + " final_dist=" + final_dist +
                  " max_contraction=" + contraction;
    out.trace = std::move(trace);
    return out;
}

void write_trace(const ddopt::Trace& trace, const std::string& path, const std::string& format) {
    std::string text =
        format == "json" ? ddopt::trace_to_json(trace) : ddopt::trace_to_csv(trace);
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        ddopt::write_text_file(path, text);
    }
}

int cmd_run(const Options& opt) {
    auto kv = parse_overrides(opt.sets);
    RunOutcome out = run_once(opt, kv);
    std::string path = opt.output;
    if (path.empty()) path = "trace." + opt.format;
    write_trace(out.trace, path, opt.format);
    std::cout << out.summary << "\n";
    return 0;
}

int cmd_analyze(const Options& opt) {
    auto kv = parse_overrides(opt.sets);
    BuiltProblem b = build_problem(opt.experiment, kv);
    auto constants = ddopt::compute_constants(b.problem);
    std::cout << ddopt::to_json(constants) << "\n";
    if (!opt.bound) return 0;

    nlohmann::ordered_json j;
    try {
        Vector x_s = ddopt::equilibrium_oracle(b.problem, b.x0, opt.tol);
        ddopt::SolverConfig inner;
        inner.tolerance = opt.tol / 100.0;
        auto kkt = ddopt::solve_constrained(ddopt::frozen_objective(b.problem, x_s), b.problem.G,
                                            ddopt::constraint_rhs(b.problem, x_s), inner);
        auto report =
            ddopt::optimality_gap_bound(b.problem, x_s, kkt.lambda_star, opt.grid);
        j = nlohmann::ordered_json::parse(ddopt::to_json(report));
        j["bound_applicable"] = true;
    } catch (const ddopt::BoundInapplicable& e) {
        j["bound_applicable"] = false;
        j["reason"] = e.what();
    }
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_sweep(const Options& opt) {
    if (opt.sweeps.empty()) throw CLI::ValidationError("--sweep", "at least one axis required");
    std::vector<std::string> keys;
    std::vector<std::vector<double>> axes;
    for (const auto& s : opt.sweeps) {
        auto pos = s.find('=');
        if (pos == std::string::npos)
            throw CLI::ValidationError("--sweep", "expected key=v1,v2,..., got '" + s + "'");
        keys.push_back(s.substr(0, pos));
        std::vector<double> vals;
        std::istringstream ss(s.substr(pos + 1));
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                vals.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw CLI::ValidationError("--sweep", "non-numeric value '" + tok + "'");
            }
        }
        if (vals.empty()) throw CLI::ValidationError("--sweep", "empty axis in '" + s + "'");
        axes.push_back(std::move(vals));
    }

    std::string dir = opt.output.empty() ? std::string("sweep") : opt.output;
    std::filesystem::create_directories(dir);

    auto base_kv = parse_overrides(opt.sets);
    nlohmann::ordered_json index = nlohmann::ordered_json::array();
    std::vector<std::size_t> idx(keys.size(), 0);
    std::size_t cell = 0;
    bool done = false;
    while (!done) {
        auto kv = base_kv;
        nlohmann::ordered_json params;
        for (std::size_t i = 0; i < keys.size(); ++i) {
            kv[keys[i]] = axes[i][idx[i]];
            params[keys[i]] = axes[i][idx[i]];
        }
        nlohmann::ordered_json entry;
        entry["cell"] = cell;
        entry["params"] = params;
        std::string file = dir + "/cell_" + std::to_string(cell) + "." + opt.format;
        try {
            RunOutcome out = run_once(opt, kv);
            write_trace(out.trace, file, opt.format);
            entry["status"] = ddopt::to_string(out.trace.status);
            entry["trace"] = file;
        } catch (const std::exception& e) {
            entry["status"] = "error";
            entry["error"] = e.what();
        }
        index.push_back(entry);
        ++cell;
        for (std::size_t i = 0;; ++i) {
            if (i == keys.size()) { done = true; break; }
            if (++idx[i] < axes[i].size()) break;
            idx[i] = 0;
        }
    }
    ddopt::write_text_file(dir + "/index.json", index.dump(2) + "\n");
    std::cout << "wrote " << cell << " cells to " << dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Iterative algorithms for constrained problems whose data distributions react "
                 "to the deployed decision"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--experiment", opt.experiment, "market, pricing, or one-dim")
            ->required();
        sub->add_option("--set", opt.sets, "parameter override key=value (repeatable)");
        sub->add_option("--seed", opt.seed, "RNG seed recorded with outputs");
    };

    auto* run = app.add_subcommand("run", "run one algorithm and emit a trace");
    add_common(run);
    run->add_option("--algorithm", opt.algorithm, "rcm or rda");
    run->add_option("--iters", opt.iters, "iteration budget");
    run->add_option("--eta", opt.eta, "dual step size, or 'auto' for the window midpoint");
    run->add_option("--output", opt.output, "trace path ('-' for stdout)");
    run->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* analyze = app.add_subcommand("analyze", "print the constants report as JSON");
    add_common(analyze);
    analyze->add_flag("--bound", opt.bound, "also evaluate the equilibrium-vs-optimal bound");
    analyze->add_option("--grid", opt.grid, "grid points per dimension for the optimal oracle");
    analyze->add_option("--tol", opt.tol, "equilibrium oracle tolerance");

    auto* sweep = app.add_subcommand("sweep", "run a Cartesian grid of configurations");
    add_common(sweep);
    sweep->add_option("--algorithm", opt.algorithm, "rcm or rda");
    sweep->add_option("--iters", opt.iters, "iteration budget");
    sweep->add_option("--eta", opt.eta, "dual step size or 'auto'");
    sweep->add_option("--sweep", opt.sweeps, "axis key=v1,v2,... (repeatable)");
    sweep->add_option("--output", opt.output, "output directory");
    sweep->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
        if (run->parsed()) return cmd_run(opt);
        if (analyze->parsed()) return cmd_analyze(opt);
        if (sweep->parsed()) return cmd_sweep(opt);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
