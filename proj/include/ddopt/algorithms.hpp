#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ddopt/inner_solver.hpp"
#include "ddopt/problem.hpp"

namespace ddopt {

struct RCMConfig {
    std::size_t max_iterations = 100;
    SolverConfig inner;
    double stop_distance = 1e-12;
};

struct RDAConfig {
    std::size_t max_iterations = 100;
    double eta = 0.1;
    SolverConfig inner;
    Vector lambda_init;  // empty means zero vector
    double stop_distance = 1e-12;
};

enum class RunStatus { Converged, BudgetExhausted, Diverged };

std::string to_string(RunStatus s);

struct TraceRecord {
    std::size_t t = 0;
    Vector x;
    Vector lambda;  // empty for RCM
    double constraint_residual = 0.0;
    double objective_value = 0.0;
    /// ‖x_t − x_ref‖ against an externally supplied reference; NaN until set
    double dist_to_reference;
};

struct Trace {
    std::vector<TraceRecord> records;
    RunStatus status = RunStatus::BudgetExhausted;
};

/// Repeatedly solves the problem frozen at the previous iterate.
Trace rcm(const PerformativeProblem& p, const Vector& x0, const RCMConfig& cfg);

/// Alternates a Lagrangian primal minimization, an auxiliary minimization at
/// the new deploy, and a projected dual gradient step.
Trace rda(const PerformativeProblem& p, const Vector& x0, const RDAConfig& cfg);

/// Fills dist_to_reference = ‖x_t − x_ref‖ for every record.
void set_reference(Trace& trace, const Vector& x_ref);

/// Ratios ‖x_{t+1}−x_ref‖ / ‖x_t−x_ref‖ over iterates with distance above
/// 10 * inner_tolerance. Throws InsufficientData when fewer than two iterates
/// qualify.
std::vector<double> measured_contraction(const Trace& trace, const Vector& x_ref,
                                         double inner_tolerance);

}  // namespace ddopt
