// Two-qubit polarization states and their figures of merit: fidelity,
// entanglement entropy, the Pauli correlation matrix, and the maximal CHSH
// value over measurement bases.
//
// Basis order is (HH, HV, VH, VV) with subsystem order (signal, idler).
// Pauli convention: sigma_z is diagonal with |H> mapped to +1, so the
// (HH, VV)-family states have t_zz = +1.

#pragma once

#include <array>
#include <string>

#include "phasebench/linalg.hpp"

namespace phasebench {

struct TwoQubitPure {
    std::array<cdouble, 4> amp{};  // (HH, HV, VH, VV)

    double norm2() const;
    bool is_normalized(double tol = 1e-12) const;
    TwoQubitPure normalized() const;

    /// Drops the global phase: the first amplitude above tol is made real
    /// and positive.
    TwoQubitPure canonical_phase(double tol = 1e-12) const;
};

cdouble inner(const TwoQubitPure& a, const TwoQubitPure& b);

enum class Bell { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

TwoQubitPure bell_state(Bell which);

/// (|HH> - e^{2i phi}|VV>)/sqrt2: the pair state carrying geometric phase
/// phi (phi = 2 * theta_h of the QHQ stack).
TwoQubitPure gp_state(double phi);

struct DensityMatrix {
    Mat4c m;

    static DensityMatrix from_pure(const TwoQubitPure& psi);
    static DensityMatrix maximally_mixed();
    /// v * |psi><psi| + (1 - v) * I/4.
    static DensityMatrix werner(double v, const TwoQubitPure& psi);

    double trace_real() const { return m.trace().real(); }
    double hermiticity_error() const;
    double min_eigenvalue() const;
    /// Hermitian within 1e-10, trace 1 within 1e-10, eigenvalues >= -1e-9.
    bool is_physical(double herm_tol = 1e-10, double trace_tol = 1e-10,
                     double psd_tol = 1e-9) const;
    void require_physical(const std::string& where) const;
};

double fidelity_pure(const TwoQubitPure& a, const TwoQubitPure& b);

/// <target| rho |target>. Throws std::invalid_argument for unphysical rho.
double fidelity_mixed(const DensityMatrix& rho, const TwoQubitPure& target);

enum class Subsystem { Signal, Idler };

/// Reduced single-photon density matrix.
Mat2c partial_trace(const DensityMatrix& rho, Subsystem keep);

/// Von Neumann entropy of the reduced signal state, in bits (log base 2,
/// 0*log0 = 0), so a maximally entangled pair gives exactly 1. For a mixed
/// input this is the entropy of the partial trace, which equals the
/// entanglement entropy only when the global state is pure. Reduced
/// eigenvalues in (-1e-9, 0) are clamped to 0.
double entanglement_entropy(const TwoQubitPure& psi);
double entanglement_entropy(const DensityMatrix& rho);

/// Binary entropy -p log2 p - (1-p) log2 (1-p).
double binary_entropy(double p);

struct CorrelationMatrix {
    std::array<std::array<double, 3>, 3> t{};  // t[m][n] = <sigma_m x sigma_n>, m,n in {x,y,z}
};

CorrelationMatrix correlation_matrix(const DensityMatrix& rho);

/// Maximal CHSH value over all measurement bases: 2*sqrt(u1+u2) with u1, u2
/// the two largest eigenvalues of T^t T (Horodecki criterion).
double horodecki_smax(const DensityMatrix& rho);

/// 0.5 * sum |eig(rho1 - rho2)|.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// Single-qubit Pauli matrices in the (H, V) basis.
Mat2c pauli_x();
Mat2c pauli_y();
Mat2c pauli_z();

}  // namespace phasebench
