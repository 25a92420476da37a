#include "phasebench/source.hpp"

#include <cmath>
#include <stdexcept>

namespace phasebench {

void PumpState::validate() const {
    if (!jones.is_normalized())
        throw std::invalid_argument("PumpState: pump Jones vector must be normalized");
}

void SourceImperfection::validate() const {
    if (amplitude_p < 0.0 || amplitude_p > 1.0)
        throw std::invalid_argument("SourceImperfection: amplitude_p outside [0, 1]");
    if (werner_v < 0.0 || werner_v > 1.0)
        throw std::invalid_argument("SourceImperfection: werner_v outside [0, 1]");
}

TwoQubitPure spdc_state(const PumpState& pump) {
    pump.validate();
    TwoQubitPure out;
    out.amp = {std::conj(pump.jones.h), 0.0, 0.0, std::conj(pump.jones.v)};
    return out.canonical_phase();
}

TwoQubitPure birefringent_evolve(const TwoQubitPure& state, double phi_h, double phi_v) {
    if (std::abs(state.amp[1]) >= 1e-12 || std::abs(state.amp[2]) >= 1e-12)
        throw std::invalid_argument(
            "birefringent_evolve: state outside the a|HH> + b|VV> family");
    TwoQubitPure out = state;
    out.amp[0] *= std::polar(1.0, phi_h);
    out.amp[3] *= std::polar(1.0, phi_v);
    return out.canonical_phase();
}

double compensation_angle(double phi_h, double phi_v) {
    const double phi = 0.5 * (phi_h - phi_v);  // solves 2*phi + phi_v - phi_h = 0
    double theta = 0.5 * phi;
    const double half_pi = 0.5 * std::numbers::pi;
    theta = std::fmod(theta, half_pi);
    if (theta < 0.0) theta += half_pi;
    return theta;
}

DensityMatrix imperfect_state(double phi, const SourceImperfection& imp) {
    imp.validate();
    TwoQubitPure psi;
    psi.amp = {std::sqrt(imp.amplitude_p), 0.0, 0.0,
               -std::polar(std::sqrt(1.0 - imp.amplitude_p), 2.0 * phi)};
    return DensityMatrix::werner(imp.werner_v, psi);
}

double relative_gp_phase(const TwoQubitPure& state) {
    if (std::abs(state.amp[0]) < 1e-9 || std::abs(state.amp[3]) < 1e-9) return 0.0;
    const double chi = std::arg(state.amp[3] / state.amp[0]);  // phase of VV vs HH
    double phi = 0.5 * (chi - std::numbers::pi);               // chi = pi + 2 phi
    phi = std::fmod(phi, std::numbers::pi);
    if (phi < 0.0) phi += std::numbers::pi;
    return phi;
}

}  // namespace phasebench
