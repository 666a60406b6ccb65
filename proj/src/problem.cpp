#include "ddopt/problem.hpp"

#include <algorithm>
#include <cmath>

#include "ddopt/errors.hpp"

namespace ddopt {

void PerformativeProblem::validate() const {
    if (decision_dim == 0) throw InvalidInput("problem: decision_dim must be positive");
    if (!loss || !loss_grad_x) throw InvalidInput("problem: missing loss oracles");
    if (G.rows == 0 || G.cols != decision_dim)
        throw InvalidInput("problem: constraint matrix shape mismatch");
    if (!(constants.gamma > 0.0) || constants.gamma > constants.beta_x + 1e-15)
        throw InvalidInput("problem: need 0 < gamma <= beta_x");
    if (constants.eps < 0.0 || constants.eps_g < 0.0 || constants.beta_z < 0.0 ||
        constants.L_z < 0.0)
        throw InvalidInput("problem: negative regularity constant");
    min_eig_gram(G);  // throws AssumptionViolation if rank deficient
}

namespace {
void check_box(const PerformativeProblem& p, const Vector& deploy) {
    if (deploy.size() != p.decision_dim)
        throw InvalidInput("problem: deploy dimension mismatch");
    for (std::size_t i = 0; i < deploy.size(); ++i)
        if (deploy[i] < p.box_lo[i] || deploy[i] > p.box_hi[i])
            throw std::domain_error("problem: deploying decision outside decision box");
}
}  // namespace

double expected_loss(const PerformativeProblem& p, const Vector& deploy, const Vector& x) {
    check_box(p, deploy);
    double v = p.loss(x, mean(p.objective_map, deploy));
    if (p.variance_offset) v += p.variance_offset(deploy);
    return v;
}

Vector expected_grad(const PerformativeProblem& p, const Vector& deploy, const Vector& x) {
    check_box(p, deploy);
    return p.loss_grad_x(x, mean(p.objective_map, deploy));
}

Vector constraint_rhs(const PerformativeProblem& p, const Vector& deploy) {
    check_box(p, deploy);
    return mean(p.constraint_map, deploy);
}

Vector feasibility_residual(const PerformativeProblem& p, const Vector& deploy, const Vector& x) {
    Vector r = sub(matvec(p.G, x), constraint_rhs(p, deploy));
    return project_nonneg(std::move(r));
}

}  // namespace ddopt
