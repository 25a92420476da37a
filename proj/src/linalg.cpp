#include "phasebench/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace phasebench {

Mat2c Mat2c::identity() {
    Mat2c m;
    m.e = {cdouble{1, 0}, {}, {}, cdouble{1, 0}};
    return m;
}

Mat2c Mat2c::diag(cdouble a, cdouble b) {
    Mat2c m;
    m.e = {a, {}, {}, b};
    return m;
}

Mat2c Mat2c::adjoint() const {
    Mat2c m;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) m(i, j) = std::conj((*this)(j, i));
    return m;
}

Mat2c operator*(const Mat2c& a, const Mat2c& b) {
    Mat2c c;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            c(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    return c;
}

Mat2c operator*(cdouble s, const Mat2c& a) {
    Mat2c c = a;
    for (auto& x : c.e) x *= s;
    return c;
}

Mat2c operator+(const Mat2c& a, const Mat2c& b) {
    Mat2c c;
    for (std::size_t k = 0; k < 4; ++k) c.e[k] = a.e[k] + b.e[k];
    return c;
}

Mat2c operator-(const Mat2c& a, const Mat2c& b) {
    Mat2c c;
    for (std::size_t k = 0; k < 4; ++k) c.e[k] = a.e[k] - b.e[k];
    return c;
}

std::array<cdouble, 2> operator*(const Mat2c& m, const std::array<cdouble, 2>& x) {
    return {m(0, 0) * x[0] + m(0, 1) * x[1], m(1, 0) * x[0] + m(1, 1) * x[1]};
}

double max_abs_diff(const Mat2c& a, const Mat2c& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < 4; ++k) d = std::max(d, std::abs(a.e[k] - b.e[k]));
    return d;
}

bool is_unitary(const Mat2c& m, double tol) {
    return max_abs_diff(m.adjoint() * m, Mat2c::identity()) <= tol;
}

Mat4c Mat4c::identity() {
    Mat4c m;
    for (std::size_t i = 0; i < 4; ++i) m(i, i) = cdouble{1, 0};
    return m;
}

Mat4c Mat4c::adjoint() const {
    Mat4c m;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) m(i, j) = std::conj((*this)(j, i));
    return m;
}

cdouble Mat4c::trace() const { return e[0] + e[5] + e[10] + e[15]; }

Mat4c operator*(const Mat4c& a, const Mat4c& b) {
    Mat4c c;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            cdouble s{};
            for (std::size_t k = 0; k < 4; ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

Mat4c operator*(cdouble s, const Mat4c& a) {
    Mat4c c = a;
    for (auto& x : c.e) x *= s;
    return c;
}

Mat4c operator+(const Mat4c& a, const Mat4c& b) {
    Mat4c c;
    for (std::size_t k = 0; k < 16; ++k) c.e[k] = a.e[k] + b.e[k];
    return c;
}

Mat4c operator-(const Mat4c& a, const Mat4c& b) {
    Mat4c c;
    for (std::size_t k = 0; k < 16; ++k) c.e[k] = a.e[k] - b.e[k];
    return c;
}

std::array<cdouble, 4> operator*(const Mat4c& m, const std::array<cdouble, 4>& x) {
    std::array<cdouble, 4> y{};
    for (std::size_t i = 0; i < 4; ++i) {
        cdouble s{};
        for (std::size_t j = 0; j < 4; ++j) s += m(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double max_abs_diff(const Mat4c& a, const Mat4c& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < 16; ++k) d = std::max(d, std::abs(a.e[k] - b.e[k]));
    return d;
}

Mat4c kron(const Mat2c& a, const Mat2c& b) {
    Mat4c m;
    for (std::size_t i1 = 0; i1 < 2; ++i1)
        for (std::size_t j1 = 0; j1 < 2; ++j1)
            for (std::size_t i2 = 0; i2 < 2; ++i2)
                for (std::size_t j2 = 0; j2 < 2; ++j2)
                    m(2 * i1 + i2, 2 * j1 + j2) = a(i1, j1) * b(i2, j2);
    return m;
}

std::array<double, 2> hermitian_eigenvalues(const Mat2c& m) {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double b2 = std::norm(m(0, 1));
    const double mean = 0.5 * (a + d);
    const double disc = std::sqrt(0.25 * (a - d) * (a - d) + b2);
    return {mean - disc, mean + disc};
}

namespace {

// One complex Jacobi rotation zeroing a(p,q); accumulates into v.
// J = P G with P the phase that makes a(p,q) real and G the real Givens
// rotation: J_pp = c*u, J_pq = -s*u, J_qp = s, J_qq = c, u = a(p,q)/|a(p,q)|.
void jacobi_rotate(Mat4c& a, Mat4c& v, std::size_t p, std::size_t q) {
    const cdouble apq = a(p, q);
    const double mag = std::abs(apq);
    if (mag == 0.0) return;
    const cdouble u = apq / mag;
    const cdouble uc = std::conj(u);
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double theta = 0.5 * std::atan2(2.0 * mag, app - aqq);
    const double c = std::cos(theta);
    const double s = std::sin(theta);

    for (std::size_t k = 0; k < 4; ++k) {  // A <- A J
        const cdouble akp = a(k, p);
        const cdouble akq = a(k, q);
        a(k, p) = c * u * akp + s * akq;
        a(k, q) = -s * u * akp + c * akq;
    }
    for (std::size_t k = 0; k < 4; ++k) {  // A <- J^dag A
        const cdouble apk = a(p, k);
        const cdouble aqk = a(q, k);
        a(p, k) = c * uc * apk + s * aqk;
        a(q, k) = -s * uc * apk + c * aqk;
    }
    for (std::size_t k = 0; k < 4; ++k) {  // V <- V J
        const cdouble vkp = v(k, p);
        const cdouble vkq = v(k, q);
        v(k, p) = c * u * vkp + s * vkq;
        v(k, q) = -s * u * vkp + c * vkq;
    }
}

double off_norm(const Mat4c& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace

Eigensystem4 hermitian_eigensystem(const Mat4c& m) {
    Mat4c a = m;
    // Symmetrize to kill round-off asymmetry before iterating.
    for (std::size_t i = 0; i < 4; ++i) {
        a(i, i) = cdouble{a(i, i).real(), 0.0};
        for (std::size_t j = i + 1; j < 4; ++j) {
            const cdouble avg = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = avg;
            a(j, i) = std::conj(avg);
        }
    }
    Mat4c v = Mat4c::identity();
    constexpr double kTol = 1e-12;
    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps && off_norm(a) > kTol; ++sweep) {
        for (std::size_t p = 0; p < 4; ++p)
            for (std::size_t q = p + 1; q < 4; ++q) jacobi_rotate(a, v, p, q);
    }

    std::array<std::size_t, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

    Eigensystem4 out;
    for (std::size_t k = 0; k < 4; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < 4; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

std::array<double, 3> symmetric_eigenvalues(const std::array<std::array<double, 3>, 3>& m) {
    std::array<std::array<double, 3>, 3> a = m;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != j) off += a[i][j] * a[i][j];
        if (off < 1e-24) break;
        for (int p = 0; p < 3; ++p)
            for (int q = p + 1; q < 3; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = 0.5 * std::atan2(2.0 * a[p][q], a[p][p] - a[q][q]);
                const double c = std::cos(theta), s = std::sin(theta);
                for (int k = 0; k < 3; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp + s * akq;
                    a[k][q] = -s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk + s * aqk;
                    a[q][k] = -s * apk + c * aqk;
                }
            }
    }
    std::array<double, 3> vals{a[0][0], a[1][1], a[2][2]};
    std::sort(vals.begin(), vals.end());
    return vals;
}

std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b,
                                std::size_t n, double pivot_tol) {
    if (a.size() != n * n || b.size() != n)
        throw std::invalid_argument("solve_dense: shape mismatch");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        if (std::abs(a[piv * n + col]) < pivot_tol)
            throw std::runtime_error("solve_dense: singular system (pivot " +
                                     std::to_string(col) + " below tolerance)");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[col * n + j], a[piv * n + j]);
            std::swap(b[col], b[piv]);
        }
        const double inv = 1.0 / a[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] * inv;
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) a[r * n + j] -= f * a[col * n + j];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * x[j];
        x[i] = s / a[i * n + i];
    }
    return x;
}

}  // namespace phasebench
