#pragma once

#include <functional>

#include "ddopt/distribution.hpp"
#include "ddopt/numerics.hpp"

namespace ddopt {

/// Regularity constants supplied with a problem. Declared analytically by
/// the constructor; the test suite verifies them empirically.
struct ProblemConstants {
    double gamma = 0.0;    // strong convexity of the loss in x
    double beta_x = 0.0;   // smoothness of the loss in x
    double beta_z = 0.0;   // Lipschitz modulus of the gradient in z
    double L_z = 0.0;      // Lipschitz modulus of the loss in z
    double eps = 0.0;      // objective map sensitivity
    double eps_g = 0.0;    // constraint map sensitivity
};

/// Linearly constrained problem with decision-dependent distributions:
/// minimize E_{z ~ D(x)} l(x, z)  subject to  G x <= E_{w ~ Dg(x)} w.
struct PerformativeProblem {
    std::size_t decision_dim = 0;
    std::function<double(const Vector& x, const Vector& z)> loss;
    std::function<Vector(const Vector& x, const Vector& z)> loss_grad_x;
    DistributionMap objective_map;   // z, dimension d_z
    DistributionMap constraint_map;  // w, dimension d_w
    /// Constant correction so that expected_loss is the true expectation for
    /// losses quadratic in z; zero for losses affine in z.
    std::function<double(const Vector& deploy)> variance_offset;
    Matrix G;                        // d_w x n
    ProblemConstants constants;
    Vector box_lo, box_hi;           // decision box
    bool quadratic_in_x = true;

    void validate() const;
};

/// f_deploy(x) = E_{z ~ D(deploy)} l(x, z)
double expected_loss(const PerformativeProblem& p, const Vector& deploy, const Vector& x);

/// Gradient of f_deploy at x.
Vector expected_grad(const PerformativeProblem& p, const Vector& deploy, const Vector& x);

/// xi(deploy): right-hand side of the frozen constraint G x <= xi(deploy).
Vector constraint_rhs(const PerformativeProblem& p, const Vector& deploy);

/// Componentwise max(0, G x - xi(deploy)).
Vector feasibility_residual(const PerformativeProblem& p, const Vector& deploy, const Vector& x);

}  // namespace ddopt
