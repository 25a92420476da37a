#include "phasebench/jones.hpp"

#include <cmath>
#include <stdexcept>

namespace phasebench {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrt2 = 0.7071067811865475244;
}  // namespace

double JonesVector::norm2() const { return std::norm(h) + std::norm(v); }

bool JonesVector::is_normalized(double tol) const { return std::abs(norm2() - 1.0) <= tol; }

JonesVector JonesVector::normalized() const {
    const double n = std::sqrt(norm2());
    if (n == 0.0) throw std::invalid_argument("cannot normalize the zero Jones vector");
    return {h / n, v / n};
}

cdouble inner(const JonesVector& a, const JonesVector& b) {
    return std::conj(a.h) * b.h + std::conj(a.v) * b.v;
}

JonesVector operator*(const Mat2c& m, const JonesVector& x) {
    return {m(0, 0) * x.h + m(0, 1) * x.v, m(1, 0) * x.h + m(1, 1) * x.v};
}

JonesVector operator*(cdouble s, const JonesVector& x) { return {s * x.h, s * x.v}; }

JonesVector basis_h() { return {1.0, 0.0}; }
JonesVector basis_v() { return {0.0, 1.0}; }
JonesVector basis_d() { return {kInvSqrt2, kInvSqrt2}; }
JonesVector basis_a() { return {kInvSqrt2, -kInvSqrt2}; }
JonesVector basis_r() { return {kInvSqrt2, cdouble{0.0, -kInvSqrt2}}; }
JonesVector basis_l() { return {kInvSqrt2, cdouble{0.0, kInvSqrt2}}; }

JonesMatrix waveplate(double retardance, double fast_axis) {
    // Fast axis measured from vertical; its direction in (x, y) components
    // is (-sin t, cos t), i.e. the x-axis angle is t + pi/2.
    const double a = fast_axis + 0.5 * kPi;
    const double c = std::cos(a);
    const double s = std::sin(a);
    const cdouble r = std::polar(1.0, retardance);
    JonesMatrix m;
    m(0, 0) = c * c + r * s * s;
    m(0, 1) = (1.0 - r) * c * s;
    m(1, 0) = (1.0 - r) * c * s;
    m(1, 1) = s * s + r * c * c;
    return m;
}

JonesMatrix half_wave_plate(double fast_axis) { return waveplate(kPi, fast_axis); }
JonesMatrix quarter_wave_plate(double fast_axis) { return waveplate(0.5 * kPi, fast_axis); }

JonesMatrix qhq_transfer(const GpSetup& setup) { return qhq_transfer(setup.theta_h); }

JonesMatrix qhq_transfer(double theta_h) {
    return JonesMatrix::diag(std::polar(1.0, 2.0 * theta_h), -std::polar(1.0, -2.0 * theta_h));
}

JonesMatrix qhq_composed(double theta_h) {
    const JonesMatrix q = quarter_wave_plate(deg2rad(45.0));
    return q * half_wave_plate(theta_h) * q;
}

double pancharatnam_phase(const JonesVector& a, const JonesVector& b) {
    const cdouble ov = inner(a, b);
    const double scale = std::sqrt(a.norm2() * b.norm2());
    if (scale == 0.0 || std::abs(ov) <= 1e-12 * scale)
        throw std::invalid_argument("pancharatnam_phase: undefined phase for orthogonal states");
    double phi = std::arg(ov);
    if (phi <= -kPi) phi = kPi;  // report in (-pi, pi]
    return phi;
}

double classical_projection_power(const JonesVector& pump, const JonesVector& polarizer_basis,
                                  NormPolicy policy) {
    JonesVector p = pump;
    JonesVector b = polarizer_basis;
    if (!p.is_normalized() || !b.is_normalized()) {
        if (policy == NormPolicy::Reject)
            throw std::invalid_argument("classical_projection_power: unnormalized input");
        p = p.normalized();
        b = b.normalized();
    }
    return std::norm(inner(b, p));
}

}  // namespace phasebench
