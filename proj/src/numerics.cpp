#include "ddopt/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ddopt/errors.hpp"

namespace ddopt {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

bool all_finite(const Vector& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

bool all_finite(const Matrix& m) { return all_finite(m.data); }

double dot(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const Vector& v) { return std::sqrt(dot(v, v)); }

double norm_inf(const Vector& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

Vector add(const Vector& a, const Vector& b) {
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vector sub(const Vector& a, const Vector& b) {
    Vector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vector scaled(const Vector& v, double s) {
    Vector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] * s;
    return r;
}

void axpy(double s, const Vector& x, Vector& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

Vector matvec(const Matrix& a, const Vector& x) {
    Vector r(a.rows, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) r[i] += a(i, j) * x[j];
    return r;
}

Vector mat_tvec(const Matrix& a, const Vector& x) {
    Vector r(a.cols, 0.0);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) r[j] += a(i, j) * x[i];
    return r;
}

Matrix gram(const Matrix& g) {
    Matrix m(g.rows, g.rows);
    for (std::size_t i = 0; i < g.rows; ++i)
        for (std::size_t j = 0; j < g.rows; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < g.cols; ++k) s += g(i, k) * g(j, k);
            m(i, j) = s;
        }
    return m;
}

Vector solve_linear(Matrix a, Vector b) {
    if (a.rows != a.cols || b.size() != a.rows)
        throw InvalidInput("solve_linear: dimension mismatch");
    const std::size_t n = a.rows;
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(a(i, k)) > best) {
                best = std::abs(a(i, k));
                piv = i;
            }
        }
        if (best < 1e-300)
            throw AssumptionViolation("solve_linear: singular matrix");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
            std::swap(b[k], b[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            double f = a(i, k) / a(k, k);
            a(i, k) = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
            b[i] -= f * b[k];
        }
    }
    Vector x(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * x[j];
        x[ii] = s / a(ii, ii);
    }
    return x;
}

Vector sym_eigenvalues(Matrix a) {
    if (a.rows != a.cols) throw InvalidInput("sym_eigenvalues: matrix not square");
    const std::size_t n = a.rows;
    Vector ev;
    if (n == 1) {
        ev = {a(0, 0)};
    } else if (n == 2) {
        double tr = a(0, 0) + a(1, 1);
        double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
        double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
        ev = {tr / 2.0 - disc, tr / 2.0 + disc};
    } else {
        // cyclic Jacobi
        for (int sweep = 0; sweep < 100; ++sweep) {
            double off = 0.0;
            for (std::size_t p = 0; p < n; ++p)
                for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
            if (off < 1e-28) break;
            for (std::size_t p = 0; p < n; ++p) {
                for (std::size_t q = p + 1; q < n; ++q) {
                    if (std::abs(a(p, q)) < 1e-300) continue;
                    double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                    double t = (theta >= 0 ? 1.0 : -1.0) /
                               (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    double c = 1.0 / std::sqrt(t * t + 1.0);
                    double s = t * c;
                    for (std::size_t k = 0; k < n; ++k) {
                        double akp = a(k, p), akq = a(k, q);
                        a(k, p) = c * akp - s * akq;
                        a(k, q) = s * akp + c * akq;
                    }
                    for (std::size_t k = 0; k < n; ++k) {
                        double apk = a(p, k), aqk = a(q, k);
                        a(p, k) = c * apk - s * aqk;
                        a(q, k) = s * apk + c * aqk;
                    }
                }
            }
        }
        ev.resize(n);
        for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
    }
    std::sort(ev.begin(), ev.end());
    return ev;
}

double spectral_norm(const Matrix& g) {
    if (g.rows == 0 || g.cols == 0) throw InvalidInput("spectral_norm: empty matrix");
    if (!all_finite(g)) throw InvalidInput("spectral_norm: non-finite entries");
    // work with the smaller Gram side
    Matrix m;
    if (g.rows <= g.cols) {
        m = gram(g);
    } else {
        m = Matrix(g.cols, g.cols);
        for (std::size_t i = 0; i < g.cols; ++i)
            for (std::size_t j = 0; j < g.cols; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < g.rows; ++k) s += g(k, i) * g(k, j);
                m(i, j) = s;
            }
    }
    Vector ev = sym_eigenvalues(std::move(m));
    return std::sqrt(std::max(0.0, ev.back()));
}

double min_eig_gram(const Matrix& g) {
    if (g.rows == 0 || g.cols == 0) throw InvalidInput("min_eig_gram: empty matrix");
    if (!all_finite(g)) throw InvalidInput("min_eig_gram: non-finite entries");
    if (g.rows > g.cols)
        throw AssumptionViolation("min_eig_gram: more rows than columns, G cannot have full row rank");
    Vector ev = sym_eigenvalues(gram(g));
    double lo = std::max(0.0, ev.front());
    double hi = ev.back();
    if (lo < 1e-10 * hi)
        throw AssumptionViolation("min_eig_gram: G is rank deficient, full row rank required");
    return lo;
}

Vector project_nonneg(Vector v) {
    for (double& x : v) x = std::max(x, 0.0);
    return v;
}

}  // namespace ddopt
