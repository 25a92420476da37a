// Small dense complex linear algebra for two-qubit state work.
// Everything here is fixed-size (2x2, 4x4, 3x3) and deterministic; the
// Hermitian eigensolvers use a closed form (2x2) and cyclic Jacobi (4x4,
// tolerance 1e-12, at most 100 sweeps).

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace phasebench {

using cdouble = std::complex<double>;

struct Mat2c {
    std::array<cdouble, 4> e{};  // row-major

    cdouble& operator()(std::size_t i, std::size_t j) { return e[2 * i + j]; }
    const cdouble& operator()(std::size_t i, std::size_t j) const { return e[2 * i + j]; }

    static Mat2c identity();
    static Mat2c diag(cdouble a, cdouble b);

    Mat2c adjoint() const;
    cdouble trace() const { return e[0] + e[3]; }
    cdouble det() const { return e[0] * e[3] - e[1] * e[2]; }
};

Mat2c operator*(const Mat2c& a, const Mat2c& b);
Mat2c operator*(cdouble s, const Mat2c& a);
Mat2c operator+(const Mat2c& a, const Mat2c& b);
Mat2c operator-(const Mat2c& a, const Mat2c& b);
std::array<cdouble, 2> operator*(const Mat2c& m, const std::array<cdouble, 2>& x);

/// Largest |entry| of a - b.
double max_abs_diff(const Mat2c& a, const Mat2c& b);

/// True when m.adjoint() * m == I within tol (max entry deviation).
bool is_unitary(const Mat2c& m, double tol = 1e-12);

struct Mat4c {
    std::array<cdouble, 16> e{};  // row-major

    cdouble& operator()(std::size_t i, std::size_t j) { return e[4 * i + j]; }
    const cdouble& operator()(std::size_t i, std::size_t j) const { return e[4 * i + j]; }

    static Mat4c identity();

    Mat4c adjoint() const;
    cdouble trace() const;
};

Mat4c operator*(const Mat4c& a, const Mat4c& b);
Mat4c operator*(cdouble s, const Mat4c& a);
Mat4c operator+(const Mat4c& a, const Mat4c& b);
Mat4c operator-(const Mat4c& a, const Mat4c& b);
std::array<cdouble, 4> operator*(const Mat4c& m, const std::array<cdouble, 4>& x);

double max_abs_diff(const Mat4c& a, const Mat4c& b);

/// Kronecker product, row-major index convention (i1*2+i2, j1*2+j2).
Mat4c kron(const Mat2c& a, const Mat2c& b);

/// Eigenvalues of a Hermitian 2x2 matrix, ascending. Uses the closed form.
std::array<double, 2> hermitian_eigenvalues(const Mat2c& m);

struct Eigensystem4 {
    std::array<double, 4> values;  // ascending
    Mat4c vectors;                 // column k is the eigenvector for values[k]
};

/// Cyclic Jacobi diagonalization of a Hermitian 4x4 matrix.
Eigensystem4 hermitian_eigensystem(const Mat4c& m);

/// Eigenvalues of a symmetric real 3x3 matrix, ascending (Jacobi).
std::array<double, 3> symmetric_eigenvalues(const std::array<std::array<double, 3>, 3>& m);

/// Solves the dense real system A x = b by Gaussian elimination with
/// partial pivoting. A is n*n row-major. Throws std::runtime_error when a
/// pivot falls below pivot_tol (singular / rank-deficient system).
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b,
                                std::size_t n, double pivot_tol = 1e-12);

}  // namespace phasebench
