#include "phasebench/quantum.hpp"

#include <cmath>
#include <stdexcept>

namespace phasebench {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244;
}

double TwoQubitPure::norm2() const {
    double s = 0.0;
    for (const auto& a : amp) s += std::norm(a);
    return s;
}

bool TwoQubitPure::is_normalized(double tol) const { return std::abs(norm2() - 1.0) <= tol; }

TwoQubitPure TwoQubitPure::normalized() const {
    const double n = std::sqrt(norm2());
    if (n == 0.0) throw std::invalid_argument("cannot normalize the zero state");
    TwoQubitPure out;
    for (std::size_t k = 0; k < 4; ++k) out.amp[k] = amp[k] / n;
    return out;
}

TwoQubitPure TwoQubitPure::canonical_phase(double tol) const {
    for (const auto& a : amp) {
        const double mag = std::abs(a);
        if (mag > tol) {
            const cdouble u = std::conj(a) / mag;
            TwoQubitPure out;
            for (std::size_t k = 0; k < 4; ++k) out.amp[k] = u * amp[k];
            return out;
        }
    }
    return *this;
}

cdouble inner(const TwoQubitPure& a, const TwoQubitPure& b) {
    cdouble s{};
    for (std::size_t k = 0; k < 4; ++k) s += std::conj(a.amp[k]) * b.amp[k];
    return s;
}

TwoQubitPure bell_state(Bell which) {
    TwoQubitPure psi;
    switch (which) {
        case Bell::PhiPlus:
            psi.amp = {kInvSqrt2, 0.0, 0.0, kInvSqrt2};
            break;
        case Bell::PhiMinus:
            psi.amp = {kInvSqrt2, 0.0, 0.0, -kInvSqrt2};
            break;
        case Bell::PsiPlus:
            psi.amp = {0.0, kInvSqrt2, kInvSqrt2, 0.0};
            break;
        case Bell::PsiMinus:
            psi.amp = {0.0, kInvSqrt2, -kInvSqrt2, 0.0};
            break;
    }
    return psi;
}

TwoQubitPure gp_state(double phi) {
    TwoQubitPure psi;
    psi.amp = {kInvSqrt2, 0.0, 0.0, -std::polar(kInvSqrt2, 2.0 * phi)};
    return psi;
}

DensityMatrix DensityMatrix::from_pure(const TwoQubitPure& psi) {
    DensityMatrix rho;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) rho.m(i, j) = psi.amp[i] * std::conj(psi.amp[j]);
    return rho;
}

DensityMatrix DensityMatrix::maximally_mixed() {
    DensityMatrix rho;
    for (std::size_t i = 0; i < 4; ++i) rho.m(i, i) = 0.25;
    return rho;
}

DensityMatrix DensityMatrix::werner(double v, const TwoQubitPure& psi) {
    if (v < 0.0 || v > 1.0) throw std::invalid_argument("werner: v outside [0, 1]");
    DensityMatrix rho = from_pure(psi);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            rho.m(i, j) *= v;
            if (i == j) rho.m(i, j) += (1.0 - v) * 0.25;
        }
    return rho;
}

double DensityMatrix::hermiticity_error() const {
    return max_abs_diff(m, m.adjoint());
}

double DensityMatrix::min_eigenvalue() const {
    return hermitian_eigensystem(m).values[0];
}

bool DensityMatrix::is_physical(double herm_tol, double trace_tol, double psd_tol) const {
    if (hermiticity_error() > herm_tol) return false;
    if (std::abs(m.trace().real() - 1.0) > trace_tol || std::abs(m.trace().imag()) > trace_tol)
        return false;
    return min_eigenvalue() >= -psd_tol;
}

void DensityMatrix::require_physical(const std::string& where) const {
    if (!is_physical()) throw std::invalid_argument(where + ": unphysical density matrix");
}

double fidelity_pure(const TwoQubitPure& a, const TwoQubitPure& b) {
    return std::norm(inner(a, b));
}

double fidelity_mixed(const DensityMatrix& rho, const TwoQubitPure& target) {
    rho.require_physical("fidelity_mixed");
    const auto rt = rho.m * target.amp;
    cdouble f{};
    for (std::size_t k = 0; k < 4; ++k) f += std::conj(target.amp[k]) * rt[k];
    // Clamp tiny negative round-off; rho is PSD up to 1e-9 by contract.
    return std::max(0.0, f.real());
}

Mat2c partial_trace(const DensityMatrix& rho, Subsystem keep) {
    Mat2c out;
    if (keep == Subsystem::Signal) {
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                out(i, j) = rho.m(2 * i + 0, 2 * j + 0) + rho.m(2 * i + 1, 2 * j + 1);
    } else {
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                out(i, j) = rho.m(0 + i, 0 + j) + rho.m(2 + i, 2 + j);
    }
    return out;
}

namespace {

double entropy_bits(double p) {
    if (p <= 0.0) return 0.0;
    return -p * std::log2(p);
}

double reduced_entropy(const Mat2c& reduced) {
    auto eig = hermitian_eigenvalues(reduced);
    double s = 0.0;
    for (double lambda : eig) {
        if (lambda < 0.0) {
            if (lambda < -1e-9)
                throw std::invalid_argument("entanglement_entropy: reduced state not PSD");
            lambda = 0.0;
        }
        s += entropy_bits(lambda);
    }
    return s;
}

}  // namespace

double entanglement_entropy(const TwoQubitPure& psi) {
    return reduced_entropy(partial_trace(DensityMatrix::from_pure(psi), Subsystem::Signal));
}

double entanglement_entropy(const DensityMatrix& rho) {
    rho.require_physical("entanglement_entropy");
    return reduced_entropy(partial_trace(rho, Subsystem::Signal));
}

double binary_entropy(double p) { return entropy_bits(p) + entropy_bits(1.0 - p); }

Mat2c pauli_x() {
    Mat2c m;
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

Mat2c pauli_y() {
    Mat2c m;
    m(0, 1) = cdouble{0.0, -1.0};
    m(1, 0) = cdouble{0.0, 1.0};
    return m;
}

Mat2c pauli_z() { return Mat2c::diag(1.0, -1.0); }

CorrelationMatrix correlation_matrix(const DensityMatrix& rho) {
    rho.require_physical("correlation_matrix");
    const std::array<Mat2c, 3> sigma{pauli_x(), pauli_y(), pauli_z()};
    CorrelationMatrix out;
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
            out.t[a][b] = (rho.m * kron(sigma[a], sigma[b])).trace().real();
    return out;
}

double horodecki_smax(const DensityMatrix& rho) {
    const CorrelationMatrix c = correlation_matrix(rho);
    std::array<std::array<double, 3>, 3> tt{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += c.t[k][i] * c.t[k][j];
            tt[i][j] = s;
        }
    const auto u = symmetric_eigenvalues(tt);
    return 2.0 * std::sqrt(std::max(0.0, u[1] + u[2]));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    const auto eig = hermitian_eigensystem(a.m - b.m);
    double s = 0.0;
    for (double lambda : eig.values) s += std::abs(lambda);
    return 0.5 * s;
}

}  // namespace phasebench
