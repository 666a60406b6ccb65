#pragma once

#include <cstddef>
#include <vector>

namespace ddopt {

using Vector = std::vector<double>;

/// Small dense row-major matrix.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    static Matrix identity(std::size_t n);

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

bool all_finite(const Vector& v);
bool all_finite(const Matrix& m);

double dot(const Vector& a, const Vector& b);
double norm(const Vector& v);
double norm_inf(const Vector& v);
Vector add(const Vector& a, const Vector& b);
Vector sub(const Vector& a, const Vector& b);
Vector scaled(const Vector& v, double s);
/// y += s * x
void axpy(double s, const Vector& x, Vector& y);

Vector matvec(const Matrix& a, const Vector& x);
/// Aᵀx
Vector mat_tvec(const Matrix& a, const Vector& x);
/// G Gᵀ
Matrix gram(const Matrix& g);

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// Throws AssumptionViolation on a (numerically) singular pivot.
Vector solve_linear(Matrix a, Vector b);

/// Eigenvalues of a symmetric matrix, ascending. Closed form for n <= 2,
/// cyclic Jacobi sweeps otherwise.
Vector sym_eigenvalues(Matrix a);

/// Maximum singular value of G.
double spectral_norm(const Matrix& g);

/// Smallest eigenvalue of G Gᵀ. Requires full row rank: values below
/// 1e-10 times the largest eigenvalue raise AssumptionViolation.
double min_eig_gram(const Matrix& g);

/// Componentwise max with zero.
Vector project_nonneg(Vector v);

}  // namespace ddopt
