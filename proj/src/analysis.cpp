#include "ddopt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ddopt/errors.hpp"

namespace ddopt {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double ConstantsReport::kappa1(double eta) const {
    return 1.0 + a1 * eta * eta - a2 * eta + a3;
}

double ConstantsReport::kappa2(double eta) const {
    return 1.0 + (b1 * eta * eta + b2 * eta - b3) / alpha;
}

double ConstantsReport::kappa(double eta) const { return std::max(kappa1(eta), kappa2(eta)); }

double ConstantsReport::kappa3(double eta) const {
    double r = g_norm * g_norm / (gamma * gamma);
    return 1.0 - 2.0 * eta * gamma_d + eta * eta * L_d * L_d + eps_g * eta +
           eps_g * L_d * eta * eta +
           r * (eps_g * eps_g * eta * eta + eps_g * eta + eps_g * L_d * eta * eta);
}

double ConstantsReport::eta_mid() const {
    if (!window_defined) throw AssumptionViolation("step window is undefined for this instance");
    return 0.5 * (s1 + s2);
}

ConstantsReport compute_constants(const PerformativeProblem& p) {
    p.validate();
    ConstantsReport r;
    r.gamma = p.constants.gamma;
    r.beta_x = p.constants.beta_x;
    r.beta_z = p.constants.beta_z;
    r.L_z = p.constants.L_z;
    r.eps = p.constants.eps;
    r.eps_g = p.constants.eps_g;
    r.g_norm = spectral_norm(p.G);
    r.lam_min_gram = min_eig_gram(p.G);
    r.L_xstar = std::sqrt(r.beta_x / (r.gamma * r.lam_min_gram));
    r.gamma_d = r.lam_min_gram / r.beta_x;
    r.L_d = r.g_norm * r.g_norm / r.gamma;

    r.rho1 = r.eps * r.beta_z / r.gamma;
    r.rho2 = r.rho1 * r.g_norm + r.eps_g;
    r.rho3 = r.rho1 * r.g_norm / r.gamma + r.g_norm * r.g_norm / (r.gamma * r.gamma);
    r.rho4 = r.rho1 * r.rho1 + r.rho1 * r.g_norm / r.gamma;

    r.rcm_condition = r.rho1 + r.L_xstar * r.eps_g < 1.0;
    r.rda_condition_9 = r.rho2 * (1.0 + r.rho3) < 2.0 * r.gamma_d;
    r.rda_condition_10 = r.rho1 * (1.0 + r.rho1 * r.g_norm / r.gamma) < 1.0;
    // the contraction argument additionally needs rho4 < 1, which the two
    // stated inequalities do not imply when ||G||_2 > gamma; without it the
    // step window has no positive upper root, so treat the premises as failed
    if (r.rho4 >= 1.0) {
        r.rda_condition_9 = false;
        r.rda_condition_10 = false;
    }
    r.rda_fixed_obj_condition =
        r.eps_g * (1.0 + r.g_norm * r.g_norm / (r.gamma * r.gamma)) < 2.0 * r.gamma_d;

    r.a2 = 2.0 * r.gamma_d - r.rho2 * (1.0 + r.rho3);
    r.alpha_bar_sqrt = std::max(0.0, 1.0 - r.L_d * r.L_d / (4.0 * r.gamma_d * (r.rho2 + r.L_d)));
    r.a1 = r.L_d * r.L_d + r.L_d * r.rho2 + r.rho2 * r.rho2 * r.rho3 + r.L_d * r.rho2 * r.rho3;
    // 1 - alpha_bar (the square), not 1 - sqrt(alpha_bar): this is the form
    // that makes sqrt(a2^2 - 4 a1 a3) = alpha_bar_sqrt * a2 and hence s1 < s2
    r.alpha =
        (1.0 - r.alpha_bar_sqrt * r.alpha_bar_sqrt) * r.a2 * r.a2 / (4.0 * r.rho3 * r.a1);
    r.a3 = r.alpha * r.rho3;
    r.b1 = r.rho4 * (r.rho2 * r.rho2 + r.L_d * r.rho2);
    r.b2 = r.rho2 * r.rho4;
    r.b3 = r.alpha * (1.0 - r.rho4);

    // a2^2 - 4 a1 a3 equals alpha_bar * a2^2 by the choice of alpha; using
    // the closed form avoids catastrophic cancellation near the boundary
    double disc1_sqrt = r.alpha_bar_sqrt * r.a2;
    double disc2 = r.b2 * r.b2 + 4.0 * r.b1 * r.b3;
    if (r.a2 > 0.0 && r.rho4 < 1.0 && disc1_sqrt > 0.0 && disc2 >= 0.0) {
        r.s1 = (r.a2 - disc1_sqrt) / (2.0 * r.a1);
        // the dual-error factor stays below one only up to its own upper
        // root, so the window is capped there even when the primal-error
        // factor tolerates a larger step
        double s1_upper = (r.a2 + disc1_sqrt) / (2.0 * r.a1);
        double s2_primal = kInf;  // rho4 = 0: no primal growth with eta
        if (r.b1 > 0.0) {
            s2_primal = (-r.b2 + std::sqrt(disc2)) / (2.0 * r.b1);
        } else if (r.b2 > 0.0) {
            s2_primal = r.b3 / r.b2;
        }
        r.s2 = std::min(s1_upper, s2_primal);
        r.window_defined = r.s1 < r.s2;
    }
    return r;
}

bool check_rcm_condition(const ConstantsReport& r) { return r.rcm_condition; }

RDAConditions check_rda_conditions(const ConstantsReport& r) {
    return {r.rda_condition_9, r.rda_condition_10};
}

double fixed_objective_eta_bound(const ConstantsReport& r) {
    double ratio = r.g_norm * r.g_norm / (r.gamma * r.gamma);
    double num = 2.0 * r.gamma_d - r.eps_g * (1.0 + ratio);
    double den = r.L_d * r.L_d + r.eps_g * r.L_d + r.eps_g * r.eps_g * ratio +
                 r.eps_g * r.eps_g * r.L_d * ratio;
    if (den <= 0.0) return kInf;
    return num / den;
}

bool check_fixed_objective_condition(const ConstantsReport& r, double eta) {
    if (r.eps != 0.0)
        throw InvalidInput("fixed-objective condition requires a zero objective sensitivity");
    return r.rda_fixed_obj_condition && eta < fixed_objective_eta_bound(r);
}

Vector equilibrium_oracle(const PerformativeProblem& p, const Vector& x0, double tol) {
    RCMConfig cfg;
    cfg.max_iterations = 100000;
    cfg.stop_distance = tol;
    cfg.inner.tolerance = tol / 100.0;
    Trace trace = rcm(p, x0, cfg);

    int growing = 0;
    for (std::size_t i = 2; i < trace.records.size(); ++i) {
        double prev = norm(sub(trace.records[i - 1].x, trace.records[i - 2].x));
        double cur = norm(sub(trace.records[i].x, trace.records[i - 1].x));
        if (prev > 10.0 * cfg.inner.tolerance && cur > prev) {
            if (++growing >= 5)
                throw NoConvergence("equilibrium oracle: step sizes grew 5 times in a row", cur);
        } else {
            growing = 0;
        }
    }
    if (trace.status != RunStatus::Converged)
        throw NoConvergence("equilibrium oracle: no fixed point within budget",
                            norm(sub(trace.records.back().x,
                                     trace.records[trace.records.size() - 2].x)));
    Vector x_s = trace.records.back().x;
    SolverConfig check = cfg.inner;
    SolveResult re = solve_constrained(frozen_objective(p, x_s), p.G, constraint_rhs(p, x_s), check);
    double residual = norm(sub(re.x_star, x_s));
    if (residual > 10.0 * tol)
        throw NoConvergence("equilibrium oracle: fixed-point residual above tolerance", residual);
    return x_s;
}

Vector optimal_oracle(const PerformativeProblem& p, std::size_t grid_per_dim) {
    const std::size_t n = p.decision_dim;
    if (n > 3) throw InvalidInput("optimal_oracle: grid search supports up to 3 dimensions");
    if (grid_per_dim < 11) throw InvalidInput("optimal_oracle: need at least 11 points per dim");
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(p.box_lo[i]) || !std::isfinite(p.box_hi[i]))
            throw InvalidInput("optimal_oracle: decision box must be bounded");

    auto search = [&](const Vector& lo, const Vector& hi) -> Vector {
        std::vector<std::size_t> idx(n, 0);
        Vector best;
        double best_val = kInf;
        bool done = false;
        while (!done) {
            Vector x(n);
            for (std::size_t i = 0; i < n; ++i) {
                double t = static_cast<double>(idx[i]) / static_cast<double>(grid_per_dim - 1);
                x[i] = lo[i] + t * (hi[i] - lo[i]);
            }
            if (norm_inf(feasibility_residual(p, x, x)) == 0.0) {
                double val = expected_loss(p, x, x);
                if (val < best_val) {
                    best_val = val;
                    best = x;
                }
            }
            for (std::size_t i = 0;; ++i) {
                if (i == n) { done = true; break; }
                if (++idx[i] < grid_per_dim) break;
                idx[i] = 0;
            }
        }
        if (best.empty()) throw Infeasible("optimal_oracle: no feasible grid point");
        return best;
    };

    Vector coarse = search(p.box_lo, p.box_hi);
    Vector lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
        double cell = (p.box_hi[i] - p.box_lo[i]) / static_cast<double>(grid_per_dim - 1);
        lo[i] = std::max(p.box_lo[i], coarse[i] - cell);
        hi[i] = std::min(p.box_hi[i], coarse[i] + cell);
    }
    return search(lo, hi);
}

BoundReport optimality_gap_bound(const PerformativeProblem& p, const Vector& x_s,
                                 const Vector& lambda_s_star, std::size_t grid_per_dim) {
    ConstantsReport r = compute_constants(p);
    const double sqrt_dw = std::sqrt(static_cast<double>(p.G.rows));
    if (r.L_xstar * r.eps_g * sqrt_dw >= 1.0)
        throw BoundInapplicable("distance bound needs L_xstar * eps_g * sqrt(d_w) < 1");

    BoundReport b;
    b.x_s = x_s;
    b.lambda_s_star = lambda_s_star;
    b.x_o = optimal_oracle(p, grid_per_dim);
    b.measured_distance = norm(sub(b.x_o, b.x_s));
    double lam_norm = norm(lambda_s_star);
    double denom = r.gamma * (1.0 - r.L_xstar * r.eps_g * sqrt_dw) *
                   (1.0 - r.L_xstar * r.eps_g * sqrt_dw);
    if (r.eps_g == 0.0) {
        b.bound_value = 2.0 * r.L_z * r.eps / r.gamma;
    } else {
        b.bound_value = 2.0 * (r.L_z * r.eps + r.eps_g * sqrt_dw * lam_norm) / denom;
    }
    double resolution = 0.0;
    for (std::size_t i = 0; i < p.decision_dim; ++i) {
        double cell = (p.box_hi[i] - p.box_lo[i]) / static_cast<double>(grid_per_dim - 1) / 10.0;
        resolution += cell * cell;
    }
    resolution = std::sqrt(resolution);
    // grid argmin accuracy degrades with the loss conditioning
    double slack = resolution * (1.0 + std::sqrt(r.beta_x / r.gamma));
    b.bound_holds = b.measured_distance <= b.bound_value + slack;
    return b;
}

}  // namespace ddopt
