#include "ddopt/inner_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "ddopt/errors.hpp"

namespace ddopt {

namespace {

struct QuadraticForm {
    Matrix H;  // Hessian
    Vector c;  // gradient at zero
};

// grad is affine for quadratic objectives, so exact extraction needs
// dim + 1 gradient evaluations
QuadraticForm extract_quadratic(const SmoothObjective& f) {
    QuadraticForm q;
    Vector zero(f.dim, 0.0);
    q.c = f.grad(zero);
    q.H = Matrix(f.dim, f.dim);
    for (std::size_t j = 0; j < f.dim; ++j) {
        Vector e(f.dim, 0.0);
        e[j] = 1.0;
        Vector g = f.grad(e);
        for (std::size_t i = 0; i < f.dim; ++i) q.H(i, j) = g[i] - q.c[i];
    }
    return q;
}

Vector minimize_unconstrained(const SmoothObjective& f, const Vector& linear_extra,
                              const SolverConfig& cfg, const Vector* start) {
    // minimizes f(x) + <linear_extra, x>
    if (f.quadratic) {
        QuadraticForm q = extract_quadratic(f);
        Vector rhs = add(q.c, linear_extra);
        return solve_linear(q.H, scaled(rhs, -1.0));
    }
    Vector x = start ? *start : Vector(f.dim, 0.0);
    const double step = 1.0 / f.beta;
    const double stop = cfg.tolerance * f.gamma;
    for (std::size_t k = 0; k < cfg.max_iterations; ++k) {
        Vector g = add(f.grad(x), linear_extra);
        double gn = norm(g);
        if (gn <= stop) return x;
        axpy(-step, g, x);
    }
    Vector g = add(f.grad(x), linear_extra);
    throw NoConvergence("inner minimization exhausted its iteration budget", norm(g));
}

void fill_residuals(const SmoothObjective& f, const Matrix& G, const Vector& b, SolveResult& r) {
    Vector g = add(f.grad(r.x_star), mat_tvec(G, r.lambda_star));
    r.kkt_stationarity = norm(g);
    Vector slack = sub(matvec(G, r.x_star), b);
    double comp = 0.0, feas = 0.0;
    for (std::size_t i = 0; i < slack.size(); ++i) {
        comp = std::max(comp, std::abs(r.lambda_star[i] * slack[i]));
        feas = std::max(feas, slack[i]);
    }
    r.kkt_complementarity = comp;
    r.feasibility = std::max(0.0, feas);
}

SolveResult solve_active_set(const SmoothObjective& f, const Matrix& G, const Vector& b,
                             const SolverConfig& cfg) {
    const std::size_t dw = G.rows;
    const std::size_t n = f.dim;
    QuadraticForm q = extract_quadratic(f);
    const double tol = cfg.tolerance;

    SolveResult best;
    std::size_t tried = 0;
    // lexicographic over active sets encoded as bitmasks; the first subset
    // passing primal feasibility and multiplier signs wins, so degenerate
    // multipliers resolve toward smaller sets
    for (std::size_t mask = 0; mask < (std::size_t{1} << dw); ++mask) {
        ++tried;
        std::vector<std::size_t> active;
        for (std::size_t i = 0; i < dw; ++i)
            if (mask & (std::size_t{1} << i)) active.push_back(i);
        const std::size_t m = active.size();

        // KKT system [H A^T; A 0] [x; mu] = [-c; b_A]
        Matrix kkt(n + m, n + m);
        Vector rhs(n + m, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) kkt(i, j) = q.H(i, j);
            rhs[i] = -q.c[i];
        }
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t j = 0; j < n; ++j) {
                kkt(n + a, j) = G(active[a], j);
                kkt(j, n + a) = G(active[a], j);
            }
            rhs[n + a] = b[active[a]];
        }
        Vector sol;
        try {
            sol = solve_linear(kkt, rhs);
        } catch (const AssumptionViolation&) {
            continue;  // linearly dependent active rows
        }
        Vector x(sol.begin(), sol.begin() + static_cast<long>(n));
        Vector lambda(dw, 0.0);
        bool ok = true;
        for (std::size_t a = 0; a < m; ++a) {
            double mu = sol[n + a];
            if (mu < -tol) { ok = false; break; }
            lambda[active[a]] = std::max(mu, 0.0);
        }
        if (!ok) continue;
        Vector slack = sub(matvec(G, x), b);
        double scale = 1.0 + norm_inf(b);
        for (std::size_t i = 0; i < dw; ++i)
            if (slack[i] > tol * scale) { ok = false; break; }
        if (!ok) continue;

        SolveResult r;
        r.x_star = std::move(x);
        r.lambda_star = std::move(lambda);
        r.iterations = tried;
        fill_residuals(f, G, b, r);
        return r;
    }
    throw Infeasible("active-set enumeration found no KKT point");
}

SolveResult solve_dual_ascent(const SmoothObjective& f, const Matrix& G, const Vector& b,
                              const SolverConfig& cfg, const Vector* warm_lambda) {
    const double gamma_d = min_eig_gram(G) / f.beta;
    const double sn = spectral_norm(G);
    const double L_d = sn * sn / f.gamma;
    const double eta = gamma_d / (L_d * L_d);  // optimizes 1 - 2*eta*gamma_d + eta^2*L_d^2

    Vector lambda = warm_lambda ? *warm_lambda : Vector(G.rows, 0.0);
    lambda = project_nonneg(std::move(lambda));

    // extract the quadratic once; re-deriving it every dual step dominates
    // the runtime otherwise
    std::optional<QuadraticForm> q;
    if (f.quadratic) q = extract_quadratic(f);

    SolveResult r;
    double best = std::numeric_limits<double>::infinity();
    Vector x(f.dim, 0.0);
    for (std::size_t k = 1; k <= cfg.max_iterations; ++k) {
        if (q) {
            Vector rhs = add(q->c, mat_tvec(G, lambda));
            Matrix h = q->H;
            x = solve_linear(std::move(h), scaled(rhs, -1.0));
        } else {
            x = minimize_unconstrained(f, mat_tvec(G, lambda), cfg, &x);
        }
        r.x_star = x;
        r.lambda_star = lambda;
        r.iterations = k;
        fill_residuals(f, G, b, r);
        double res = std::max({r.kkt_stationarity, r.kkt_complementarity, r.feasibility});
        best = std::min(best, res);
        if (res <= cfg.tolerance) return r;
        Vector grad_d = sub(matvec(G, x), b);
        axpy(eta, grad_d, lambda);
        lambda = project_nonneg(std::move(lambda));
    }
    throw NoConvergence("dual ascent exhausted its iteration budget", best);
}

}  // namespace

SolveResult solve_constrained(const SmoothObjective& f, const Matrix& G, const Vector& b,
                              const SolverConfig& cfg, const Vector* warm_lambda) {
    if (!(f.gamma > 0.0)) throw AssumptionViolation("solve_constrained: gamma must be positive");
    min_eig_gram(G);  // full-row-rank gate
    SolveMethod method = cfg.method;
    if (method == SolveMethod::Auto)
        method = (f.quadratic && G.rows <= 6) ? SolveMethod::ActiveSet : SolveMethod::DualAscent;
    if (method == SolveMethod::ActiveSet) {
        if (!f.quadratic)
            throw InvalidInput("solve_constrained: active-set route requires a quadratic objective");
        return solve_active_set(f, G, b, cfg);
    }
    return solve_dual_ascent(f, G, b, cfg, warm_lambda);
}

Vector solve_lagrangian_min(const SmoothObjective& f, const Matrix& G, const Vector& lambda,
                            const SolverConfig& cfg) {
    for (double l : lambda)
        if (l < 0.0) throw InvalidInput("solve_lagrangian_min: lambda must be nonnegative");
    return minimize_unconstrained(f, mat_tvec(G, lambda), cfg, nullptr);
}

SmoothObjective frozen_objective(const PerformativeProblem& p, const Vector& deploy) {
    SmoothObjective f;
    f.dim = p.decision_dim;
    f.gamma = p.constants.gamma;
    f.beta = p.constants.beta_x;
    f.quadratic = p.quadratic_in_x;
    Vector z = mean(p.objective_map, deploy);
    double offset = p.variance_offset ? p.variance_offset(deploy) : 0.0;
    f.value = [loss = p.loss, z, offset](const Vector& x) { return loss(x, z) + offset; };
    f.grad = [g = p.loss_grad_x, z](const Vector& x) { return g(x, z); };
    return f;
}

}  // namespace ddopt
