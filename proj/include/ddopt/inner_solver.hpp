#pragma once

#include <cstddef>
#include <functional>

#include "ddopt/numerics.hpp"
#include "ddopt/problem.hpp"

namespace ddopt {

/// Smooth strongly convex objective with declared moduli. When `quadratic`
/// is set the gradient must be affine in x, which enables the exact
/// active-set route.
struct SmoothObjective {
    std::size_t dim = 0;
    double gamma = 0.0;
    double beta = 0.0;
    bool quadratic = false;
    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&)> grad;
};

enum class SolveMethod { DualAscent, ActiveSet, Auto };

struct SolverConfig {
    double tolerance = 1e-10;
    std::size_t max_iterations = 1'000'000;
    SolveMethod method = SolveMethod::Auto;
};

struct SolveResult {
    Vector x_star;
    Vector lambda_star;          // d_w, componentwise nonnegative
    double kkt_stationarity = 0.0;    // ||grad f(x*) + G^T lambda*||
    double kkt_complementarity = 0.0; // max_i |lambda*_i (G x* - b)_i|
    double feasibility = 0.0;         // max constraint violation
    std::size_t iterations = 0;
};

/// Solves min f(x) s.t. G x <= b to the requested KKT tolerance.
SolveResult solve_constrained(const SmoothObjective& f, const Matrix& G, const Vector& b,
                              const SolverConfig& cfg = {},
                              const Vector* warm_lambda = nullptr);

/// argmin_x f(x) + lambda^T G x.
Vector solve_lagrangian_min(const SmoothObjective& f, const Matrix& G, const Vector& lambda,
                            const SolverConfig& cfg = {});

/// Frozen objective f_deploy for a performative problem, packaged for the
/// inner solver.
SmoothObjective frozen_objective(const PerformativeProblem& p, const Vector& deploy);

}  // namespace ddopt
