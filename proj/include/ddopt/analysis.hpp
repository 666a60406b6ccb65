#pragma once

#include <cstddef>

#include "ddopt/algorithms.hpp"
#include "ddopt/problem.hpp"

namespace ddopt {

/// Every constant used by the convergence theory, computed from the declared
/// problem constants and the constraint matrix.
struct ConstantsReport {
    double gamma = 0.0, beta_x = 0.0, beta_z = 0.0, L_z = 0.0, eps = 0.0, eps_g = 0.0;
    double g_norm = 0.0;        // ||G||_2
    double lam_min_gram = 0.0;  // lambda_min(G G^T)
    double L_xstar = 0.0;       // sqrt(beta_x / (gamma * lambda_min(G G^T)))
    double gamma_d = 0.0;       // lambda_min(G G^T) / beta_x
    double L_d = 0.0;           // ||G||_2^2 / gamma

    double rho1 = 0.0, rho2 = 0.0, rho3 = 0.0, rho4 = 0.0;
    double a1 = 0.0, a2 = 0.0, a3 = 0.0;
    double b1 = 0.0, b2 = 0.0, b3 = 0.0;
    double alpha_bar_sqrt = 0.0;
    double alpha = 0.0;
    double s1 = 0.0, s2 = 0.0;
    /// False when the step window cannot be produced with real roots
    /// (contraction premises fail numerically); s1/s2 are then meaningless.
    bool window_defined = false;

    bool rcm_condition = false;        // eps*beta_z/gamma + L_xstar*eps_g < 1
    bool rda_condition_9 = false;      // rho2*(1 + rho3) < 2*gamma_d
    bool rda_condition_10 = false;     // rho1*(1 + rho1*g_norm/gamma) < 1
    bool rda_fixed_obj_condition = false;  // eps_g*(1 + g_norm^2/gamma^2) < 2*gamma_d

    double kappa1(double eta) const;  // dual-error factor
    double kappa2(double eta) const;  // primal-error factor
    double kappa(double eta) const;   // max of the two
    double kappa3(double eta) const;  // fixed-objective (eps = 0) factor
    double eta_mid() const;           // (s1 + s2) / 2; throws if window undefined
};

ConstantsReport compute_constants(const PerformativeProblem& p);

bool check_rcm_condition(const ConstantsReport& r);

/// Returns the pair of step-size-free contraction premises.
struct RDAConditions {
    bool condition9 = false;
    bool condition10 = false;
};
RDAConditions check_rda_conditions(const ConstantsReport& r);

/// Fixed-objective regime (requires eps == 0 in the report): returns true when
/// both the sensitivity threshold and the step-size upper bound admit eta.
bool check_fixed_objective_condition(const ConstantsReport& r, double eta);

/// Step-size upper bound of the fixed-objective regime.
double fixed_objective_eta_bound(const ConstantsReport& r);

/// High-accuracy RCM run to the self-consistent fixed point. Throws
/// NoConvergence when contraction visibly fails.
Vector equilibrium_oracle(const PerformativeProblem& p, const Vector& x0, double tol);

/// Brute-force grid search for the minimizer of the self-induced objective
/// over the decision box, with one 10x local refinement.
Vector optimal_oracle(const PerformativeProblem& p, std::size_t grid_per_dim);

struct BoundReport {
    Vector x_s;
    Vector x_o;
    Vector lambda_s_star;
    double measured_distance = 0.0;
    double bound_value = 0.0;
    bool bound_holds = false;
};

/// Distance bound between the equilibrium and the optimal point; x_o comes
/// from optimal_oracle at the given grid density. Throws BoundInapplicable
/// when L_xstar * eps_g * sqrt(d_w) >= 1.
BoundReport optimality_gap_bound(const PerformativeProblem& p, const Vector& x_s,
                                 const Vector& lambda_s_star, std::size_t grid_per_dim = 201);

/// Flat key-value JSON with stable key names.
std::string to_json(const ConstantsReport& r);
std::string to_json(const BoundReport& b);

}  // namespace ddopt
