#include "ddopt/algorithms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ddopt/errors.hpp"

namespace ddopt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_start(const PerformativeProblem& p, const Vector& x0) {
    if (x0.size() != p.decision_dim)
        throw InvalidInput("algorithm: x0 dimension mismatch");
    for (std::size_t i = 0; i < x0.size(); ++i)
        if (x0[i] < p.box_lo[i] || x0[i] > p.box_hi[i])
            throw InvalidInput("algorithm: x0 outside the decision box");
}

bool in_box(const PerformativeProblem& p, const Vector& x) {
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] < p.box_lo[i] || x[i] > p.box_hi[i]) return false;
    return true;
}

// an iterate past the norm guard or outside the oracle-validity box ends the
// run as diverged; its record carries NaN metrics since the oracles no longer
// apply there
bool diverged(const PerformativeProblem& p, const Vector& x, double guard) {
    return norm(x) > guard || !all_finite(x) || !in_box(p, x);
}

TraceRecord make_record(const PerformativeProblem& p, std::size_t t, const Vector& x,
                        Vector lambda, bool escaped) {
    TraceRecord r;
    r.t = t;
    r.x = x;
    r.lambda = std::move(lambda);
    if (escaped) {
        r.constraint_residual = kNaN;
        r.objective_value = kNaN;
    } else {
        r.constraint_residual = norm_inf(feasibility_residual(p, x, x));
        r.objective_value = expected_loss(p, x, x);
    }
    r.dist_to_reference = kNaN;
    return r;
}

}  // namespace

std::string to_string(RunStatus s) {
    switch (s) {
        case RunStatus::Converged: return "converged";
        case RunStatus::BudgetExhausted: return "budget-exhausted";
        case RunStatus::Diverged: return "diverged";
    }
    return "unknown";
}

Trace rcm(const PerformativeProblem& p, const Vector& x0, const RCMConfig& cfg) {
    if (cfg.max_iterations < 1) throw InvalidInput("rcm: max_iterations must be >= 1");
    check_start(p, x0);
    const double guard = 1e6 * (1.0 + norm(x0));

    Trace trace;
    trace.records.push_back(make_record(p, 0, x0, {}, false));
    Vector x = x0;
    for (std::size_t t = 1; t <= cfg.max_iterations; ++t) {
        SolveResult sol;
        try {
            sol = solve_constrained(frozen_objective(p, x), p.G, constraint_rhs(p, x), cfg.inner);
        } catch (const std::exception& e) {
            throw NoConvergence("rcm: inner solve failed at iteration " + std::to_string(t) +
                                    ": " + e.what(),
                                std::numeric_limits<double>::infinity());
        }
        Vector x_next = sol.x_star;
        bool escaped = diverged(p, x_next, guard);
        trace.records.push_back(make_record(p, t, x_next, {}, escaped));
        if (escaped) {
            trace.status = RunStatus::Diverged;
            return trace;
        }
        if (norm(sub(x_next, x)) <= cfg.stop_distance) {
            trace.status = RunStatus::Converged;
            return trace;
        }
        x = std::move(x_next);
    }
    trace.status = RunStatus::BudgetExhausted;
    return trace;
}

Trace rda(const PerformativeProblem& p, const Vector& x0, const RDAConfig& cfg) {
    if (cfg.max_iterations < 1) throw InvalidInput("rda: max_iterations must be >= 1");
    if (!(cfg.eta > 0.0)) throw InvalidInput("rda: eta must be positive");
    check_start(p, x0);
    Vector lambda = cfg.lambda_init.empty() ? Vector(p.G.rows, 0.0) : cfg.lambda_init;
    if (lambda.size() != p.G.rows) throw InvalidInput("rda: lambda_init dimension mismatch");
    for (double l : lambda)
        if (l < 0.0) throw InvalidInput("rda: lambda_init must be nonnegative");
    const double guard = 1e6 * (1.0 + norm(x0));

    Trace trace;
    trace.records.push_back(make_record(p, 0, x0, lambda, false));
    Vector x_prev = x0;
    for (std::size_t t = 1; t <= cfg.max_iterations; ++t) {
        Vector x;
        try {
            x = solve_lagrangian_min(frozen_objective(p, x_prev), p.G, lambda, cfg.inner);
        } catch (const std::exception& e) {
            throw NoConvergence("rda: inner solve failed at iteration " + std::to_string(t) +
                                    ": " + e.what(),
                                std::numeric_limits<double>::infinity());
        }
        bool escaped = diverged(p, x, guard);
        trace.records.push_back(make_record(p, t, x, lambda, escaped));
        if (escaped) {
            trace.status = RunStatus::Diverged;
            return trace;
        }
        Vector y_bar, xi;
        try {
            y_bar = solve_lagrangian_min(frozen_objective(p, x), p.G, lambda, cfg.inner);
            xi = constraint_rhs(p, x);
        } catch (const std::exception& e) {
            throw NoConvergence("rda: inner solve failed at iteration " + std::to_string(t) +
                                    ": " + e.what(),
                                std::numeric_limits<double>::infinity());
        }
        Vector step = sub(matvec(p.G, y_bar), xi);
        axpy(cfg.eta, step, lambda);
        lambda = project_nonneg(std::move(lambda));
        if (norm(sub(x, x_prev)) <= cfg.stop_distance && t > 1) {
            trace.status = RunStatus::Converged;
            return trace;
        }
        x_prev = std::move(x);
    }
    trace.status = RunStatus::BudgetExhausted;
    return trace;
}

void set_reference(Trace& trace, const Vector& x_ref) {
    for (auto& r : trace.records) r.dist_to_reference = norm(sub(r.x, x_ref));
}

std::vector<double> measured_contraction(const Trace& trace, const Vector& x_ref,
                                         double inner_tolerance) {
    std::vector<double> ratios;
    std::size_t qualifying = 0;
    const double floor = 10.0 * inner_tolerance;
    for (std::size_t i = 0; i + 1 < trace.records.size(); ++i) {
        double d0 = norm(sub(trace.records[i].x, x_ref));
        double d1 = norm(sub(trace.records[i + 1].x, x_ref));
        if (d0 > floor) {
            ++qualifying;
            ratios.push_back(d1 / d0);
        }
    }
    if (qualifying < 2) throw InsufficientData("measured_contraction: fewer than two iterates above the noise floor");
    return ratios;
}

}  // namespace ddopt
