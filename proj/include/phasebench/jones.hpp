// Jones calculus for the pump-side optics: waveplates, the QHQ stack that
// writes a geometric phase onto the beam, the Pancharatnam connection, and
// classical polarizer projection powers.
//
// Conventions (used consistently across the project):
//   * Basis order (H, V); |H> = (1, 0), |V> = (0, 1).
//   * |D> = (|H>+|V>)/sqrt2, |A> = (|H>-|V>)/sqrt2,
//     |R> = (|H>-i|V>)/sqrt2, |L> = (|H>+i|V>)/sqrt2.
//   * Waveplate fast-axis angles are measured from the vertical axis,
//     counterclockwise, in radians. This is the reference used on the
//     physical bench, where the quarter-wave plates of the QHQ stack sit
//     at 45 degrees.
//   * Retarder matrix: R(a) diag(1, e^{i delta}) R(-a) with a the fast-axis
//     direction, i.e. the fast-axis component is unchanged in phase and the
//     slow axis picks up e^{i delta}.
// With these choices Q(45) H(theta) Q(45) equals the ideal transfer matrix
// diag(e^{2i theta}, -e^{-2i theta}) up to one theta-independent global
// phase (-i). A determinant argument shows no retarder phase convention can
// remove that factor: the three-plate product always has det +1 while the
// ideal matrix has det -1.

#pragma once

#include <numbers>

#include "phasebench/linalg.hpp"

namespace phasebench {

constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

struct JonesVector {
    cdouble h{};
    cdouble v{};

    double norm2() const;
    bool is_normalized(double tol = 1e-12) const;
    JonesVector normalized() const;
};

/// <a|b>, conjugate-linear in the first argument.
cdouble inner(const JonesVector& a, const JonesVector& b);

JonesVector operator*(const Mat2c& m, const JonesVector& x);
JonesVector operator*(cdouble s, const JonesVector& x);

// Canonical single-photon basis states.
JonesVector basis_h();
JonesVector basis_v();
JonesVector basis_d();
JonesVector basis_a();
JonesVector basis_r();
JonesVector basis_l();

using JonesMatrix = Mat2c;

/// Linear retarder with the given retardance and fast-axis angle (radians,
/// from vertical). retardance pi is a half-wave plate, pi/2 a quarter-wave
/// plate.
JonesMatrix waveplate(double retardance, double fast_axis);

JonesMatrix half_wave_plate(double fast_axis);
JonesMatrix quarter_wave_plate(double fast_axis);

/// The QHQ geometric-phase stack: quarter-wave plates fixed at 45 degrees,
/// half-wave plate at theta_h. The imprinted geometric phase is 2*theta_h.
struct GpSetup {
    double theta_h = 0.0;  // radians

    double geometric_phase() const { return 2.0 * theta_h; }
};

/// Ideal QHQ transfer matrix diag(e^{2i theta_h}, -e^{-2i theta_h}),
/// constructed directly (no waveplate global-phase factor).
JonesMatrix qhq_transfer(const GpSetup& setup);
JonesMatrix qhq_transfer(double theta_h);

/// The same stack composed from its three physical waveplates. Equals
/// qhq_transfer() up to a global phase of -i.
JonesMatrix qhq_composed(double theta_h);

/// Pancharatnam connection arg<a|b> in (-pi, pi]. Throws
/// std::invalid_argument for (numerically) orthogonal inputs, where the
/// phase is undefined.
double pancharatnam_phase(const JonesVector& a, const JonesVector& b);

enum class NormPolicy { Reject, Normalize };

/// |<basis|pump>|^2. Both vectors must be normalized; with the default
/// policy unnormalized input is rejected with std::invalid_argument.
double classical_projection_power(const JonesVector& pump, const JonesVector& polarizer_basis,
                                  NormPolicy policy = NormPolicy::Reject);

}  // namespace phasebench
